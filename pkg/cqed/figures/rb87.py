"""
End-to-end run with the 87Rb cavity parameters (or any scenario file).

Reports the heralding window, p_cav, and p / fidelity / P_overall for both
heralding conventions, and names the convention that reproduces the
reference values when a reference is given.  A scenario with a `sweep`
section also gets one row per sweep point.
"""
from typing import Dict, Optional

import pandas as pd

from .. import console
from ..classes import TWO_PI, CavityParams, FigureRun, ScenarioConfig
from ..config_loader import builtin_scenario_path, load_scenario
from ..emitter import default_grid, emission_probability, spectral_amplitude
from ..entangler import fidelity_vs_time, herald, herald_window, heralding_window, synthesize
from ..helpers import FrequencyGrid, parallel_map
from .utils import FigureResult, linspace_sweep

FIGURE_ID = "rb87"
SPEED_OF_LIGHT_KM_PER_US = 0.299792458

# sweep axis -> CavityParams field of cavity A
SWEPT_FIELDS = {"g1": "g", "gamma1": "gamma"}


def matched_convention(record: Dict, reference: Optional[Dict], tolerance: Optional[Dict]) -> str:
    if not reference:
        return "n/a"
    matches = []
    for convention, suffix in (("spectral", ""), ("click", "_click")):
        fidelity_ok = abs(record[f"fidelity{suffix}"] - reference["fidelity"]) <= tolerance["fidelity"]
        probability_ok = abs(record[f"P_overall{suffix}"] - reference["P_overall"]) <= tolerance["P_overall"]
        if fidelity_ok and probability_ok:
            matches.append(convention)
    return ",".join(matches) or "none"


def rate_scale(config: ScenarioConfig) -> float:
    """Factor from the scenario's written rates to angular units."""
    return TWO_PI if config.units.mode == "physical" else 1.0


def scenario_grid(config: ScenarioConfig, params_A: CavityParams) -> FrequencyGrid:
    half_width = config.grid.half_width
    if half_width is not None:
        half_width *= rate_scale(config)
    return default_grid(params_A, n_points=config.grid.n_points, width_factor=config.grid.width_factor,
                        half_width=half_width)


def herald_point(config: ScenarioConfig, params_A: CavityParams, params_B: CavityParams,
                 max_workers: Optional[int] = None) -> Dict:
    """Window, p_cav and both heralding readings for one pair of cavities."""
    grid = scenario_grid(config, params_A)
    t_start, dt_wait = heralding_window(params_B)
    if config.timing.t_start is not None:
        t_start = config.timing.t_start
    if config.timing.dt_wait is not None:
        dt_wait = config.timing.dt_wait

    spectrum = spectral_amplitude(params_A, grid)
    p_cav = emission_probability(params_A)
    spectral = herald(synthesize(params_A, params_B, t_start + dt_wait, grid, spectrum=spectrum), p_cav)
    click = herald_window(params_A, params_B, grid, t_start=t_start, dt_wait=dt_wait,
                          n_times=config.timing.n_times, spectrum=spectrum, max_workers=max_workers)
    return {
        "t_start": t_start,
        "dt_wait": dt_wait,
        "p_cav": p_cav,
        "p": spectral.p,
        "fidelity": spectral.fidelity,
        "P_overall": spectral.P_overall,
        "p_click": click.p,
        "fidelity_click": click.fidelity,
        "P_overall_click": click.P_overall,
    }


def run_rb87(config: ScenarioConfig, distance_km: float = 0.0, reference: Optional[Dict] = None,
             tolerance: Optional[Dict] = None) -> Dict:
    params_A, params_B = config.params_a(), config.params_b()
    console.step(f"{config.name}: grid {config.grid.n_points} points")
    point = herald_point(config, params_A, params_B)

    distance_km = distance_km or config.timing.distance_km
    if distance_km and config.units.mode != "physical":
        console.warn("distance ignored: travel time needs physical units")
        distance_km = 0.0
    travel = distance_km / SPEED_OF_LIGHT_KM_PER_US

    record = {"scenario": config.name, "t_start": point["t_start"], "dt_wait": point["dt_wait"],
              "travel_time": travel, "detection_opens": travel + point["t_start"]}
    record.update((key, value) for key, value in point.items() if key not in record)
    record["matched_convention"] = matched_convention(record, reference, tolerance)
    return record


def run_sweep(config: ScenarioConfig) -> FigureResult:
    """Rows over the scenario's sweep axis; g1/gamma1 values are written in the scenario's rate units."""
    sweep = config.sweep
    params_A, params_B = config.params_a(), config.params_b()
    values = linspace_sweep(sweep.model_dump())
    scale = rate_scale(config)
    console.step(f"{config.name}: sweeping {sweep.axis} over {len(values)} points")

    if sweep.axis == "t":
        frame = fidelity_vs_time(params_A, params_B, values, scenario_grid(config, params_A))
    else:
        gamma2_values = sweep.gamma2_values if sweep.gamma2_values is not None else [config.cavity_b.gamma]
        jobs = [(value, gamma2, params_A.replace(**{SWEPT_FIELDS[sweep.axis]: value * scale}),
                 params_B.replace(gamma=gamma2 * scale))
                for gamma2 in gamma2_values for value in values]

        def point(job):
            value, gamma2, emitter, scatterer = job
            return {sweep.axis: value, "gamma2": gamma2, **herald_point(config, emitter, scatterer, max_workers=1)}

        frame = pd.DataFrame(parallel_map(point, jobs))

    xlabel = sweep.axis
    if config.units.mode == "physical":
        xlabel += " [us]" if sweep.axis == "t" else " [MHz, r/2pi]"
    metadata = {"command": "scenario", "scenario": config.name, "units": config.units.mode,
                "sweep": sweep.model_dump(exclude_none=True),
                "params_a": params_A.model_dump(), "params_b": params_B.model_dump()}
    return FigureResult(f"{config.name}_{sweep.axis}", frame, metadata, x=sweep.axis,
                        series=["fidelity", "fidelity_click"], xlabel=xlabel, ylabel="fidelity")


def run(request: FigureRun, definition: Dict) -> FigureResult:
    path = request.config_path or builtin_scenario_path(definition.get("scenario", "rb87"))
    config = load_scenario(path)
    if request.grid_points or request.grid_width:
        grid = config.grid.model_copy(update={
            "n_points": request.grid_points or config.grid.n_points,
            "half_width": request.grid_width or config.grid.half_width,
        })
        config = config.model_copy(update={"grid": grid})

    # the reference numbers only describe the built-in 87Rb parameters
    builtin = request.config_path is None
    record = run_rb87(config, distance_km=request.distance_km,
                      reference=definition.get("reference") if builtin else None,
                      tolerance=definition.get("tolerance") if builtin else None)

    time_unit = "us" if config.units.mode == "physical" else "dimensionless"
    console.summary_table(f"{config.name} ({time_unit})", record)
    if record["matched_convention"] == "none":
        console.warn("neither heralding convention reproduces the reference values; see DESIGN.md")

    metadata = {
        "scenario": path, "units": config.units.mode, "time_unit": time_unit,
        "params_a": config.params_a().model_dump(), "params_b": config.params_b().model_dump(),
        "grid_points": config.grid.n_points, "grid_width_factor": config.grid.width_factor,
        "grid_half_width": config.grid.half_width,
        "reference": definition.get("reference") if builtin else None,
    }
    return FigureResult(FIGURE_ID, pd.DataFrame([record]), metadata)
