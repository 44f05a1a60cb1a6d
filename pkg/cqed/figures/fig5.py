"""Fidelity versus gamma1 for gamma2 = 0 and gamma2 = 1."""
from typing import Dict

import pandas as pd

from ..classes import CavityParams, FigureRun
from ..entangler import herald_prob_vs_gamma
from .utils import FigureResult, grid_metadata, grid_options, linspace_sweep

FIGURE_ID = "fig5"


def gamma_sweep(request: FigureRun, definition: Dict):
    a, b = definition["cavity_a"], definition["cavity_b"]
    template_A = CavityParams.compromise(a["kappa"], 0.0)
    template_B = CavityParams(gamma=0.0, **b)
    sweep = definition["sweep"]
    options = grid_options(request, definition)

    frame = herald_prob_vs_gamma(template_A, template_B, linspace_sweep(sweep),
                                 gamma2_values=sweep.get("gamma2_values", [0.0, 1.0]),
                                 grid_points=options["n_points"], width_factor=options["width_factor"],
                                 half_width=options["half_width"])
    half = template_B.kappa / 2
    frame.insert(1, "gamma1_in_kappa2_over_2", frame["gamma1"] / half)
    frame.insert(2, "gamma1_in_2_over_kappa2", frame["gamma1"] / (2 / template_B.kappa))
    metadata = {"kappa1": template_A.kappa, "g1_rule": "(kappa1-gamma1)/(8*sqrt(2))",
                "params_b": {k: v for k, v in template_B.model_dump().items() if k != "gamma"},
                "window": "t_start = 2.05/(kappa2/2), dt_wait = 14.95/(kappa2/2)",
                "x_unit": definition["x_unit"], **grid_metadata(options)}
    return frame, metadata


def run(request: FigureRun, definition: Dict) -> FigureResult:
    frame, metadata = gamma_sweep(request, definition)
    columns = ["gamma1", "gamma1_in_kappa2_over_2", "gamma1_in_2_over_kappa2", "gamma2", "g1",
               "fidelity", "fidelity_click", "p", "p_click"]
    return FigureResult(FIGURE_ID, pd.DataFrame(frame[columns]), metadata, x="gamma1_in_kappa2_over_2",
                        series=["fidelity", "fidelity_click"], xlabel="gamma1 [kappa2/2]", ylabel="fidelity")
