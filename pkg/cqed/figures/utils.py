import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from ..classes import CavityParams, FigureRun
from ..emitter import default_grid
from ..helpers import FrequencyGrid, write_csv


@dataclass
class FigureResult:
    figure_id: str
    frame: pd.DataFrame
    metadata: Dict = field(default_factory=dict)
    x: Optional[str] = None
    series: List[str] = field(default_factory=list)
    xlabel: str = ""
    ylabel: str = ""
    # non-zero when the figure itself failed a check (audit rows, reference mismatch is not a failure)
    exit_code: int = 0


def grid_options(request: FigureRun, definition: Dict) -> Dict:
    """Grid settings after command-line overrides."""
    defaults = definition.get("grid", {})
    return {
        "n_points": request.grid_points or defaults.get("n_points", 4001),
        "width_factor": defaults.get("width_factor", 40.0),
        "half_width": request.grid_width,
    }


def figure_grid(params_A: CavityParams, options: Dict) -> FrequencyGrid:
    return default_grid(params_A, **options)


def grid_metadata(options: Dict, grid: Optional[FrequencyGrid] = None) -> Dict:
    meta = {"grid_points": options["n_points"], "grid_width_factor": options["width_factor"]}
    if options.get("half_width") is not None:
        meta["grid_half_width"] = options["half_width"]
    elif grid is not None:
        meta["grid_half_width"] = f"{grid.half_width:.12g}"
    return meta


def linspace_sweep(sweep: Dict) -> List[float]:
    n = int(sweep["n"])
    start, stop = float(sweep["start"]), float(sweep["stop"])
    if n == 1:
        return [start]
    step = (stop - start) / (n - 1)
    return [start + k * step for k in range(n)]


def save(result: FigureResult, out_dir: str, plot: bool = False) -> List[str]:
    """Write <id>.csv and optionally <id>.svg; returns written paths."""
    csv_path = os.path.join(out_dir, f"{result.figure_id}.csv")
    written = [write_csv(result.frame, csv_path, {"figure": result.figure_id, **result.metadata})]
    if plot and result.x and result.series:
        from ..plotting import render_svg
        svg_path = os.path.join(out_dir, f"{result.figure_id}.svg")
        written.append(render_svg(result.frame, result.x, result.series, svg_path,
                                  xlabel=result.xlabel, ylabel=result.ylabel, title=result.figure_id))
    return written
