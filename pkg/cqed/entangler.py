"""
Heralded two-atom state built from the photon of cavity A scattered at cavity B.

Two heralding readings are supported:

spectral  the frequency-resolved tripartite state A_i(omega, t); the photon is
          traced out and p = N(t) is the outgoing weight accumulated by t.
click     the omega integral is carried out, giving time-domain output
          amplitudes cc_i(t); a click inside [t_start, t_start + dt_wait]
          heralds the pair.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from . import console
from .classes import CavityParams
from .emitter import default_grid, emission_probability, spectral_amplitude
from .errors import FidelityUndefinedError
from .helpers import (FrequencyGrid, SpectralFunction, parallel_map, require_nonnegative_time,
                      simpson_weights)
from .scatterer import scatter_channel

ENTANGLED = 1 / math.sqrt(2)
PLATEAU_ONSET = 2.05  # in units of 2/kappa_2
WAIT_WINDOW = 14.95
MIN_PROBABILITY = 1e-12


@dataclass(frozen=True, eq=False)
class TripartiteState:
    """A1: |g_L>_A|g_L>_B|L>, A2: |g_R>_A|g_L>_B|R>, A3: |g_L>_A|g_R>_B|R>."""

    grid: FrequencyGrid
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    t: float

    def norm(self) -> float:
        density = np.abs(self.A1) ** 2 + np.abs(self.A2) ** 2 + np.abs(self.A3) ** 2
        return float(np.real(self.grid.integrate(density)))

    def click_amplitudes(self) -> np.ndarray:
        """cc_1..cc_3 at time t: the omega integral of each channel over sqrt(2 pi)."""
        return np.array([self.grid.integrate(a) for a in (self.A1, self.A2, self.A3)]) / math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class HeraldResult:
    p: float
    fidelity: float
    P_overall: float
    t: float
    p_cav: float
    convention: str = "spectral"


def heralding_window(params_B: CavityParams) -> Tuple[float, float]:
    """(t_start, dt_wait) scaled by the cavity-B field decay time 2/kappa_2."""
    unit = 2.0 / params_B.kappa
    return PLATEAU_ONSET * unit, WAIT_WINDOW * unit


def synthesize(params_A: CavityParams, params_B: CavityParams, t: float, grid: FrequencyGrid,
               alpha: complex = ENTANGLED, beta: complex = ENTANGLED,
               spectrum: Optional[SpectralFunction] = None) -> TripartiteState:
    require_nonnegative_time(t)
    spectrum = spectrum or spectral_amplitude(params_A, grid)
    channel = scatter_channel(params_B, grid.samples, t, alpha, beta)
    phase = 1.0 if np.isinf(t) else np.exp(-1j * grid.samples * t)
    s = spectrum.values * phase
    return TripartiteState(grid=grid, A1=s * channel.out_1, A2=s * channel.out_2, A3=s * channel.out_4, t=t)


def singlet_fidelity(weight_difference: float, p: float) -> float:
    if p < MIN_PROBABILITY:
        raise FidelityUndefinedError(f"heralding probability {p:.3e} too small to condition on")
    return float(min(max(weight_difference / (2 * p), 0.0), 1.0))


def herald(state: TripartiteState, p_cav: float) -> HeraldResult:
    p = state.norm()
    difference = float(np.real(state.grid.integrate(np.abs(state.A3 - state.A2) ** 2)))
    fidelity = singlet_fidelity(difference, p)
    return HeraldResult(p=p, fidelity=fidelity, P_overall=p_cav * p, t=state.t, p_cav=p_cav)


def click_amplitudes(params_A: CavityParams, params_B: CavityParams, t_grid: Iterable[float],
                     grid: FrequencyGrid, alpha: complex = ENTANGLED, beta: complex = ENTANGLED,
                     spectrum: Optional[SpectralFunction] = None,
                     max_workers: Optional[int] = None) -> np.ndarray:
    """cc_i(t) for every t, shape (3, len(t_grid)). max_workers=1 evaluates serially."""
    spectrum = spectrum or spectral_amplitude(params_A, grid)
    times = list(t_grid)
    columns = parallel_map(
        lambda t: synthesize(params_A, params_B, t, grid, alpha, beta, spectrum=spectrum).click_amplitudes(),
        times, max_workers=max_workers)
    return np.array(columns).T.reshape(3, len(times))


def click_fidelity(cc: np.ndarray) -> np.ndarray:
    flux = np.sum(np.abs(cc) ** 2, axis=0)
    difference = np.abs(cc[2] - cc[1]) ** 2
    return np.where(flux > MIN_PROBABILITY, difference / (2 * np.where(flux > 0, flux, 1.0)), np.nan)


def herald_window(params_A: CavityParams, params_B: CavityParams, grid: FrequencyGrid,
                  t_start: Optional[float] = None, dt_wait: Optional[float] = None,
                  n_times: int = 801, spectrum: Optional[SpectralFunction] = None,
                  max_workers: Optional[int] = None) -> HeraldResult:
    """Click heralding integrated over [t_start, t_start + dt_wait]."""
    default_start, default_wait = heralding_window(params_B)
    t_start = default_start if t_start is None else t_start
    dt_wait = default_wait if dt_wait is None else dt_wait
    times = np.linspace(t_start, t_start + dt_wait, n_times)
    weights = simpson_weights(n_times, dt_wait / (n_times - 1))

    cc = click_amplitudes(params_A, params_B, times, grid, spectrum=spectrum, max_workers=max_workers)
    p = float(np.sum(weights * np.sum(np.abs(cc) ** 2, axis=0)))
    difference = float(np.sum(weights * np.abs(cc[2] - cc[1]) ** 2))
    p_cav = emission_probability(params_A)
    return HeraldResult(p=p, fidelity=singlet_fidelity(difference, p), P_overall=p_cav * p,
                        t=t_start + dt_wait, p_cav=p_cav, convention="click")


def fidelity_vs_time(params_A: CavityParams, params_B: CavityParams, t_grid: Sequence[float],
                     grid: Optional[FrequencyGrid] = None) -> pd.DataFrame:
    """Spectral fidelity and probability, plus the instantaneous click fidelity, per time."""
    grid = grid or default_grid(params_A)
    spectrum = spectral_amplitude(params_A, grid)
    p_cav = emission_probability(params_A)

    def point(t):
        state = synthesize(params_A, params_B, t, grid, spectrum=spectrum)
        result = herald(state, p_cav)
        cc = state.click_amplitudes()[:, None]
        return result.t, result.p, result.fidelity, float(np.sum(np.abs(cc) ** 2)), float(click_fidelity(cc)[0])

    rows = parallel_map(point, list(t_grid))
    return pd.DataFrame(rows, columns=["t", "p", "fidelity", "flux_click", "fidelity_click"])


def _sweep_point(emitter: CavityParams, scatterer: CavityParams, grid_points: int, width_factor: float,
                 half_width: Optional[float]):
    grid = default_grid(emitter, n_points=grid_points, width_factor=width_factor, half_width=half_width)
    spectrum = spectral_amplitude(emitter, grid)
    p_cav = emission_probability(emitter)
    t_start, dt_wait = heralding_window(scatterer)
    end = t_start + dt_wait
    spectral = herald(synthesize(emitter, scatterer, end, grid, spectrum=spectrum), p_cav)
    # already inside a pool worker
    click = herald_window(emitter, scatterer, grid, spectrum=spectrum, max_workers=1)
    return {
        "gamma1": emitter.gamma,
        "gamma2": scatterer.gamma,
        "g1": emitter.g,
        "p_cav": p_cav,
        "p": spectral.p,
        "fidelity": spectral.fidelity,
        "P_overall": spectral.P_overall,
        "p_click": click.p,
        "fidelity_click": click.fidelity,
        "P_overall_click": click.P_overall,
    }


def herald_prob_vs_gamma(template_A: CavityParams, template_B: CavityParams, gamma1_grid: Sequence[float],
                         gamma2_values: Sequence[float] = (0.0, 1.0), grid_points: int = 4001,
                         width_factor: float = 40.0, half_width: Optional[float] = None) -> pd.DataFrame:
    """Sweep gamma_1 with g_1 = (kappa_1 - gamma_1)/(8 sqrt 2), for each gamma_2."""
    jobs = [(CavityParams.compromise(template_A.kappa, gamma1, template_A.delta), template_B.replace(gamma=gamma2))
            for gamma2 in gamma2_values for gamma1 in gamma1_grid]
    console.step(f"sweeping {len(jobs)} (gamma1, gamma2) points")
    rows = parallel_map(lambda job: _sweep_point(job[0], job[1], grid_points, width_factor, half_width), jobs)
    return pd.DataFrame(rows)


def fidelity_vs_gamma(template_A: CavityParams, template_B: CavityParams, gamma1_grid: Sequence[float],
                      gamma2_values: Sequence[float] = (0.0, 1.0), **grid_options) -> pd.DataFrame:
    frame = herald_prob_vs_gamma(template_A, template_B, gamma1_grid, gamma2_values, **grid_options)
    return frame[["gamma1", "gamma2", "g1", "fidelity", "fidelity_click"]]
