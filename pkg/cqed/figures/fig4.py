"""Fidelity of the heralded pair versus time at the strong-coupling parameters."""
from typing import Dict

from ..classes import CavityParams, FigureRun
from ..entangler import fidelity_vs_time, heralding_window
from .utils import FigureResult, figure_grid, grid_metadata, grid_options, linspace_sweep

FIGURE_ID = "fig4"


def run(request: FigureRun, definition: Dict) -> FigureResult:
    a, b = definition["cavity_a"], definition["cavity_b"]
    params_A = CavityParams.compromise(a["kappa"], a["gamma"])
    params_B = CavityParams(**b)
    options = grid_options(request, definition)
    grid = figure_grid(params_A, options)

    unit = 2 / params_B.kappa
    times = [x * unit for x in linspace_sweep(definition["sweep"])]
    frame = fidelity_vs_time(params_A, params_B, times, grid)
    frame.insert(1, "t_in_2_over_kappa2", frame["t"] / unit)
    frame.insert(2, "t_in_kappa2_over_2", frame["t"] / (params_B.kappa / 2))

    t_start, dt_wait = heralding_window(params_B)
    metadata = {
        "params_a": params_A.model_dump(), "params_b": params_B.model_dump(),
        "t_start": f"{t_start:.12g}", "dt_wait": f"{dt_wait:.12g}",
        "convention": "spectral (p, fidelity); click (flux_click, fidelity_click)",
        "x_unit": definition["x_unit"], **grid_metadata(options, grid),
    }
    return FigureResult(FIGURE_ID, frame, metadata, x="t_in_2_over_kappa2", series=["fidelity", "fidelity_click"],
                        xlabel="t [2/kappa2]", ylabel="fidelity")
