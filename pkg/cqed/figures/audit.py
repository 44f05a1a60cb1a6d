"""
Closed forms against the ODE oracle on seeded random parameter draws.

One row per draw: the worst of the emitter amplitudes, the free scatterer
amplitudes, the driven integrals C_j and the flux-balance residual.
"""
import math
from typing import Dict

import numpy as np
import pandas as pd

from .. import console
from ..classes import CavityParams, FigureRun
from ..emitter import emitter_amplitudes
from ..errors import NumericalError
from ..oracle import comparison_report, integrate_effective
from ..scatterer import flux_balance, intracavity_amplitudes, output_time_integrals
from .utils import FigureResult

FIGURE_ID = "audit"


def _draw_params(rng: np.random.Generator) -> CavityParams:
    kappa = rng.uniform(1.0, 10.0)
    return CavityParams(g=rng.uniform(0.05, 1.5) * kappa, kappa=kappa, gamma=rng.uniform(0.0, 0.5) * kappa,
                        delta=rng.uniform(-1.0, 1.0) * kappa)


def _worst(name: str, closed: np.ndarray, oracle: np.ndarray):
    errors = np.abs(np.asarray(closed) - np.asarray(oracle))
    k = int(np.argmax(errors))
    return name, abs(closed[k]), abs(oracle[k]), float(errors[k])


def audit_draw(rng: np.random.Generator, ode_tolerance: float):
    emitter_params = _draw_params(rng)
    t_a = rng.uniform(0.1, 5.0) / emitter_params.kappa
    scatter_params = _draw_params(rng)
    t_b = rng.uniform(0.1, 5.0) / scatter_params.kappa
    delta_omega = rng.uniform(-2.0, 2.0) * scatter_params.kappa
    polar = rng.uniform(0.0, math.pi / 2)
    alpha = math.cos(polar)
    beta = math.sin(polar) * np.exp(1j * rng.uniform(0.0, 2 * math.pi))

    checks = []
    amplitudes = emitter_amplitudes(emitter_params, t_a)
    closed = np.array([amplitudes.s_e, amplitudes.s_1, amplitudes.s_2], dtype=complex)
    ode = integrate_effective("emitter", emitter_params, t_a, tol=ode_tolerance).final
    checks.append(_worst("emitter amplitudes", closed, ode))

    free = intracavity_amplitudes(scatter_params, delta_omega, t_b, alpha, beta).as_vector()
    ode = integrate_effective("scatterer", scatter_params, t_b, delta_omega, alpha, beta, tol=ode_tolerance).final
    checks.append(_worst("scatterer amplitudes", free, ode))

    driven = output_time_integrals(scatter_params, delta_omega, t_b, alpha, beta).as_vector()
    ode = integrate_effective("scatterer_driven", scatter_params, t_b, delta_omega, alpha, beta,
                              tol=ode_tolerance).final
    checks.append(_worst("driven integrals C", driven, ode))

    residual = float(flux_balance(scatter_params, delta_omega, t_b, alpha, beta))
    checks.append(("flux balance residual", residual, 0.0, abs(residual)))
    return max(checks, key=lambda check: check[3])


def run_audit(seed: int, n_draws: int, tolerance: float = 1e-7, ode_tolerance: float = 1e-11) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    rows = []
    for draw in range(n_draws):
        try:
            name, closed, oracle, error = audit_draw(rng, ode_tolerance)
        except NumericalError as e:
            console.warn(f"draw {draw}: oracle failed: {e}")
            name, closed, oracle, error = f"oracle failed: {e}", math.nan, math.nan, math.nan
        rows.append({"quantity": f"draw {draw}: {name}", "closed_form": closed, "oracle": oracle,
                     "abs_err": error, "tolerance": tolerance})
    return comparison_report(rows)


def run(request: FigureRun, definition: Dict) -> FigureResult:
    tolerance = definition.get("tolerance", 1e-7)
    frame = run_audit(request.seed, request.n_draws, tolerance, definition.get("ode_tolerance", 1e-11))
    failed = int((~frame["pass"].astype(bool)).sum())
    if failed:
        console.error(f"{failed} of {len(frame)} audit rows failed")
    else:
        console.success(f"all {len(frame)} audit rows within {tolerance:g}")
    metadata = {"seed": request.seed, "n_draws": request.n_draws, "tolerance": tolerance,
                "ode_tolerance": definition.get("ode_tolerance", 1e-11)}
    return FigureResult(FIGURE_ID, frame, metadata, exit_code=2 if failed else 0)
