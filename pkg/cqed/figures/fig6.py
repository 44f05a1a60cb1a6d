"""Heralding probability versus gamma1 for gamma2 = 0 and gamma2 = 1."""
from typing import Dict

import pandas as pd

from ..classes import FigureRun
from .fig5 import gamma_sweep
from .utils import FigureResult

FIGURE_ID = "fig6"


def run(request: FigureRun, definition: Dict) -> FigureResult:
    frame, metadata = gamma_sweep(request, definition)
    columns = ["gamma1", "gamma1_in_kappa2_over_2", "gamma1_in_2_over_kappa2", "gamma2", "g1",
               "p_cav", "p", "P_overall", "p_click", "P_overall_click"]
    return FigureResult(FIGURE_ID, pd.DataFrame(frame[columns]), metadata, x="gamma1_in_kappa2_over_2",
                        series=["p", "p_click"], xlabel="gamma1 [kappa2/2]", ylabel="heralding probability")
