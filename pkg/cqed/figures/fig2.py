"""Photon emission probability and spectral width of cavity A versus g1."""
from typing import Dict

import numpy as np
import pandas as pd

from ..classes import CavityParams, FigureRun
from ..emitter import emission_probability, emission_spectrum, fwhm, numeric_fwhm
from ..helpers import parallel_map
from .utils import FigureResult, figure_grid, grid_metadata, grid_options, linspace_sweep

FIGURE_ID = "fig2"


def emitter_point(params: CavityParams, options: Dict) -> Dict:
    grid = figure_grid(params, options)
    on_grid = 2 * np.real(grid.integrate(emission_spectrum(params, grid.samples)))
    return {
        "p_cav": emission_probability(params),
        "fwhm": fwhm(params, fallback=True),
        "fwhm_numeric": numeric_fwhm(params),
        "p_cav_grid": float(on_grid),
        "grid_half_width": grid.half_width,
    }


def run(request: FigureRun, definition: Dict) -> FigureResult:
    kappa = definition["cavity_a"]["kappa"]
    gamma = definition["cavity_a"]["gamma"]
    unit = kappa / 5
    options = grid_options(request, definition)

    def point(g1):
        params = CavityParams(g=g1, kappa=kappa, gamma=gamma)
        return {"g1": g1, "g1_in_kappa1_over_5": g1 / unit, **emitter_point(params, options)}

    frame = pd.DataFrame(parallel_map(point, linspace_sweep(definition["sweep"])))
    metadata = {"kappa1": kappa, "gamma1": gamma, "x_unit": definition["x_unit"], **grid_metadata(options)}
    return FigureResult(FIGURE_ID, frame, metadata, x="g1_in_kappa1_over_5", series=["p_cav", "fwhm"],
                        xlabel="g1 [kappa1/5]", ylabel="p_cav, FWHM")
