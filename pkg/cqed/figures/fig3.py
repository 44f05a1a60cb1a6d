"""Emission probability and spectral width versus gamma1 at g1 = (kappa1 - gamma1)/(8 sqrt 2)."""
from typing import Dict

import pandas as pd

from ..classes import CavityParams, FigureRun
from ..helpers import parallel_map
from .fig2 import emitter_point
from .utils import FigureResult, grid_metadata, grid_options, linspace_sweep

FIGURE_ID = "fig3"


def run(request: FigureRun, definition: Dict) -> FigureResult:
    kappa = definition["cavity_a"]["kappa"]
    unit = kappa / 5
    options = grid_options(request, definition)

    def point(gamma1):
        params = CavityParams.compromise(kappa, gamma1)
        return {"gamma1": gamma1, "gamma1_in_kappa1_over_5": gamma1 / unit, "g1": params.g,
                **emitter_point(params, options)}

    frame = pd.DataFrame(parallel_map(point, linspace_sweep(definition["sweep"])))
    metadata = {"kappa1": kappa, "g1_rule": "(kappa1-gamma1)/(8*sqrt(2))", "x_unit": definition["x_unit"],
                **grid_metadata(options)}
    return FigureResult(FIGURE_ID, frame, metadata, x="gamma1_in_kappa1_over_5", series=["p_cav", "fwhm"],
                        xlabel="gamma1 [kappa1/5]", ylabel="p_cav, FWHM")
