"""SVG renderings of figure frames; the CSV stays the data product."""
import os
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def render_svg(frame: pd.DataFrame, x: str, series: List[str], path: str,
               xlabel: str = "", ylabel: str = "", title: str = "") -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    plt.rcParams["svg.hashsalt"] = "cqed"
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = frame.groupby("gamma2") if "gamma2" in frame and frame["gamma2"].nunique() > 1 else [(None, frame)]
    for key, part in groups:
        for column in series:
            label = column if key is None else f"{column} (gamma2={key:g})"
            ax.plot(part[x], part[column], label=label)
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
