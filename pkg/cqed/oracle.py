"""
Independent numerical checks of the closed forms.

- integrate_effective: adaptive DOP853 integration of the effective
  (non-Hermitian) Schroedinger equations.
- simulate_discretized_bath: Hermitian evolution of cavity A coupled to a
  discretized output continuum.
- time_domain_scatter: cavity B driven by the emitted photon envelope,
  with output = input + sqrt(kappa) * intracavity field.
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from . import console, emitter, scatterer
from .classes import CavityParams
from .errors import ConfigurationError, DomainError, FidelityUndefinedError, StepSizeError
from .helpers import simpson_weights

OracleSpec = Literal["emitter", "scatterer", "scatterer_driven"]
RESIDUAL_LIMIT = 1e-3


@dataclass(frozen=True, eq=False)
class OdeSolution:
    times: np.ndarray
    amplitudes: np.ndarray  # (dimension, len(times))
    tolerances: Tuple[float, float]
    n_evaluations: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.amplitudes[:, -1]


@dataclass(frozen=True, eq=False)
class DiscretizedBathModel:
    n_modes: int
    mode_frequencies: np.ndarray
    coupling: float
    state: np.ndarray
    spectral_density: np.ndarray  # both polarizations, |amplitude|^2 / spacing
    occupation: float
    residual: float
    converged: bool

    @property
    def spacing(self) -> float:
        return float(self.mode_frequencies[1] - self.mode_frequencies[0])

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.state) ** 2))


@dataclass(frozen=True, eq=False)
class TimeDomainScatter:
    times: np.ndarray
    outputs: np.ndarray  # (4, len(times)) in channel order 1..4
    cavity: np.ndarray   # (5, len(times)) intracavity amplitudes


def _solve(generator: np.ndarray, start: np.ndarray, t_end: float, tol: float,
           t_eval: Optional[np.ndarray], source: Optional[Callable] = None) -> OdeSolution:
    if tol < 1e-12:
        raise DomainError(f"tolerance must be >= 1e-12, got {tol}")
    if t_end < 0:
        raise DomainError(f"t_end must be non-negative, got {t_end}")
    atol = tol * 1e-2
    if t_end == 0:
        return OdeSolution(times=np.array([0.0]), amplitudes=start[:, None].copy(), tolerances=(tol, atol))

    if source is None:
        def rhs(t, y):
            return generator @ y
    else:
        def rhs(t, y):
            return generator @ y + source(t)

    solution = solve_ivp(rhs, (0.0, t_end), start.astype(complex), method="DOP853",
                         rtol=tol, atol=atol, t_eval=t_eval)
    if solution.status < 0:
        raise StepSizeError(f"DOP853 failed at t_end={t_end}: {solution.message}")
    return OdeSolution(times=solution.t, amplitudes=solution.y, tolerances=(tol, atol),
                       n_evaluations=solution.nfev)


def integrate_effective(spec: OracleSpec, params: CavityParams, t_end: float, delta_omega: float = 0.0,
                        alpha: complex = 1.0, beta: complex = 0.0, tol: float = 1e-10,
                        t_eval: Optional[np.ndarray] = None) -> OdeSolution:
    if spec == "emitter":
        generator = -1j * emitter.effective_hamiltonian(params)
        return _solve(generator, np.array([1, 0, 0], dtype=complex), t_end, tol, t_eval)

    generator = -1j * scatterer.effective_hamiltonian(params, delta_omega)
    v = scatterer.input_vector(alpha, beta)
    if spec == "scatterer":
        return _solve(generator, v, t_end, tol, t_eval)
    if spec == "scatterer_driven":
        push = -math.sqrt(params.kappa) * v
        return _solve(generator, np.zeros(5, dtype=complex), t_end, tol, t_eval, source=lambda t: push)
    raise ConfigurationError(f"unknown oracle '{spec}'", field="spec")


def simulate_discretized_bath(params_A: CavityParams, n_modes: int, W: float, t_end: float) -> DiscretizedBathModel:
    """Single excitation of cavity A plus 2 x n_modes output modes, frame omega_c = 0."""
    if n_modes < 201 or n_modes % 2 == 0:
        raise ConfigurationError(f"need an odd mode count >= 201, got {n_modes}", field="n_modes")
    width = emitter.fwhm(params_A, fallback=True)
    if W < 20 * width:
        raise ConfigurationError(f"bath half width {W:g} below 20 x FWHM ({20 * width:g})", field="W")

    frequencies = np.linspace(-W, W, n_modes)
    spacing = frequencies[1] - frequencies[0]
    if t_end >= 2 * math.pi / spacing:
        console.warn(f"t_end={t_end:g} is past the bath recurrence time {2 * math.pi / spacing:g}")
    coupling = math.sqrt(params_A.kappa * spacing / (2 * math.pi))

    size = 3 + 2 * n_modes
    h = np.zeros((size, size), dtype=complex)
    h[0, 0] = -params_A.delta - 0.5j * params_A.gamma
    h[0, 1] = h[1, 0] = h[0, 2] = h[2, 0] = params_A.g
    for cavity, offset in ((1, 3), (2, 3 + n_modes)):
        modes = slice(offset, offset + n_modes)
        h[cavity, modes] = -1j * coupling
        h[modes, cavity] = 1j * coupling
        h[modes, modes] = np.diag(frequencies)

    start = np.zeros(size, dtype=complex)
    start[0] = 1.0
    if params_A.gamma == 0:
        energies, vectors = np.linalg.eigh(h)
        state = vectors @ (np.exp(-1j * energies * t_end) * (vectors.conj().T @ start))
    else:
        state = expm(-1j * h * t_end) @ start

    left = np.abs(state[3:3 + n_modes]) ** 2
    right = np.abs(state[3 + n_modes:]) ** 2
    occupation = float(np.sum(left + right))
    residual = float(np.sum(np.abs(state[:3]) ** 2))
    converged = residual <= RESIDUAL_LIMIT
    if not converged:
        console.warn(f"discretized bath not converged: {residual:.2e} still in atom/cavity at t={t_end:g}")
    return DiscretizedBathModel(n_modes=n_modes, mode_frequencies=frequencies, coupling=coupling, state=state,
                                spectral_density=(left + right) / spacing, occupation=occupation,
                                residual=residual, converged=converged)


def time_domain_scatter(input_field: Callable, params_B: CavityParams, t_end: float, tol: float = 1e-10,
                        alpha: complex = 1 / math.sqrt(2), beta: complex = 1 / math.sqrt(2),
                        t_eval: Optional[np.ndarray] = None) -> TimeDomainScatter:
    """Cavity B driven by input_field(t) in the cavity frame; returns output field per channel."""
    generator = -1j * scatterer.effective_hamiltonian(params_B, 0.0)
    v = scatterer.input_vector(alpha, beta)
    root_kappa = math.sqrt(params_B.kappa)

    def source(t):
        return -root_kappa * complex(input_field(t)) * v

    solution = _solve(generator, np.zeros(5, dtype=complex), t_end, tol, t_eval, source=source)
    drive = np.array([complex(input_field(t)) for t in solution.times])
    direct = v[1:, None] * drive[None, :]
    outputs = direct + root_kappa * solution.amplitudes[1:]
    return TimeDomainScatter(times=solution.times, outputs=outputs, cavity=solution.amplitudes)


def herald_window_time_domain(params_A: CavityParams, params_B: CavityParams, t_start: float,
                              dt_wait: float, n_times: int = 801, tol: float = 1e-10) -> Tuple[float, float]:
    """(p, fidelity) of click heralding computed without any frequency integral."""
    times = np.linspace(t_start, t_start + dt_wait, n_times)
    t_eval = np.concatenate([[0.0], times]) if t_start > 0 else times
    run = time_domain_scatter(emitter.make_envelope(params_A), params_B,
                              t_start + dt_wait, tol=tol, t_eval=t_eval)
    outputs = run.outputs[:, -n_times:]
    weights = simpson_weights(n_times, dt_wait / (n_times - 1))
    p = float(np.sum(weights * np.sum(np.abs(outputs) ** 2, axis=0)))
    if p < 1e-12:
        raise FidelityUndefinedError(f"heralding probability {p:.3e} too small to condition on")
    # channels 2 and 4 carry |g_R g_L> and |g_L g_R>
    difference = float(np.sum(weights * np.abs(outputs[3] - outputs[1]) ** 2))
    return p, difference / (2 * p)


def comparison_report(rows: List[Dict]) -> pd.DataFrame:
    columns = ["quantity", "closed_form", "oracle", "abs_err", "rel_err", "tolerance", "pass"]
    frame = pd.DataFrame(rows)
    for column in columns:
        if column not in frame:
            frame[column] = np.nan
    if len(frame):
        missing = frame["abs_err"].isna()
        frame.loc[missing, "abs_err"] = (frame["closed_form"] - frame["oracle"]).abs()[missing]
        scale = frame[["closed_form", "oracle"]].abs().max(axis=1).clip(lower=1e-300)
        frame["rel_err"] = frame["abs_err"] / scale
        frame["pass"] = frame["abs_err"] <= frame["tolerance"]
    return frame[columns]
