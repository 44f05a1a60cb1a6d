"""
Cavity A: an excited Lambda atom decays into the two polarized cavity modes
and leaks a photon entangled with the atom's ground states.

Amplitudes live in the frame rotating at the atomic frequency, with
delta = omega_c - omega_e.  Spectra are reported against the offset
delta_omega = omega - omega_c.
"""
import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import solve_continuous_lyapunov
from scipy.optimize import brentq, minimize_scalar

from . import console
from .classes import CavityParams
from .errors import ConsistencyError, DivergenceError, TruncationError, UnsupportedRegimeError
from .helpers import (FrequencyGrid, SpectralFunction, exp_cosh, exp_sinhc, make_grid,
                      require_nonnegative_time)

# grid mass allowed outside [-W, W] before spectral_amplitude refuses the grid
TRUNCATION_LIMIT = 1e-3
# (params, half width) pairs whose tail warning was already shown
_warned_tails = set()


@dataclass(frozen=True)
class EmitterRoots:
    mu: complex
    nu: complex

    @property
    def poles(self) -> Tuple[complex, complex]:
        return self.nu + self.mu, self.nu - self.mu


@dataclass(frozen=True, eq=False)
class EmitterAmplitudes:
    s_e: np.ndarray
    s_1: np.ndarray
    s_2: np.ndarray
    t: np.ndarray

    @property
    def norm(self):
        return np.abs(self.s_e) ** 2 + np.abs(self.s_1) ** 2 + np.abs(self.s_2) ** 2


def _drive(params: CavityParams) -> complex:
    return (1j * params.delta + params.kappa / 2 - params.gamma / 2) / 2


def emitter_roots(params: CavityParams) -> EmitterRoots:
    mu = cmath.sqrt(_drive(params) ** 2 - 2 * params.g ** 2)
    nu = -(1j * params.delta + params.kappa / 2 + params.gamma / 2) / 2
    return EmitterRoots(mu=mu, nu=nu)


def is_decaying(roots: EmitterRoots) -> bool:
    return all(p.real < 0 for p in roots.poles)


def _require_decaying(params: CavityParams, roots: EmitterRoots) -> None:
    if not is_decaying(roots):
        raise DivergenceError(
            f"emitter does not decay for {params.model_dump()}: poles {roots.poles}")


def effective_hamiltonian(params: CavityParams) -> np.ndarray:
    """Non-Hermitian H on (|e>, |g_L L>, |g_R R>), atomic frame; i d/dt psi = H psi."""
    g = params.g
    cavity = params.delta - 0.5j * params.kappa
    return np.array([
        [-0.5j * params.gamma, g, g],
        [g, cavity, 0.0],
        [g, 0.0, cavity],
    ], dtype=complex)


def emitter_matrix(params: CavityParams) -> np.ndarray:
    """Generator of (s_e, s_1 + s_2); its eigenvalues are nu +- mu."""
    return np.array([
        [-params.gamma / 2, -1j * params.g],
        [-2j * params.g, -1j * params.delta - params.kappa / 2],
    ], dtype=complex)


def emitter_amplitudes(params: CavityParams, t, roots: Optional[EmitterRoots] = None) -> EmitterAmplitudes:
    require_nonnegative_time(t)
    roots = roots or emitter_roots(params)
    t = np.asarray(t, dtype=float)

    sh = exp_sinhc(roots.nu, roots.mu, t)
    s_e = _drive(params) * sh + exp_cosh(roots.nu, roots.mu, t)
    s_1 = -1j * params.g * sh
    return EmitterAmplitudes(s_e=s_e, s_1=s_1, s_2=s_1, t=t)


def emission_spectrum(params: CavityParams, delta_omega, roots: Optional[EmitterRoots] = None):
    """T(omega) = kappa/2pi |F|^2 with F the transform of s_1 from the two-pole form."""
    roots = roots or emitter_roots(params)
    _require_decaying(params, roots)
    return params.kappa / (2 * math.pi) * np.abs(_transform(params, roots, delta_omega)) ** 2


def _transform(params: CavityParams, roots: EmitterRoots, delta_omega):
    # atomic frame -> cavity offset: the phase carries delta_omega + delta
    z = 1j * (np.asarray(delta_omega, dtype=float) + params.delta) + roots.nu
    return -1j * params.g / ((z - roots.mu) * (z + roots.mu))


def loss_budget(params: CavityParams) -> Tuple[float, float]:
    """(p_cav, p_atom) from one Lyapunov solve over the reduced generator."""
    _require_decaying(params, emitter_roots(params))
    generator = emitter_matrix(params)
    start = np.array([[1.0], [0.0]], dtype=complex)
    gram = solve_continuous_lyapunov(generator, -start @ start.conj().T)
    # |s_1|^2 + |s_2|^2 = |s_1 + s_2|^2 / 2
    p_cav = params.kappa / 2 * gram[1, 1].real
    p_atom = params.gamma * gram[0, 0].real
    return float(p_cav), float(p_atom)


def emission_probability(params: CavityParams, roots: Optional[EmitterRoots] = None) -> float:
    roots = roots or emitter_roots(params)
    _require_decaying(params, roots)

    if params.delta != 0:
        value = loss_budget(params)[0]
    else:
        mu, nu = roots.mu, roots.nu
        exact = params.kappa * params.g ** 2 / (2 * nu * (mu ** 2 - nu ** 2))
        if abs(exact.imag) > 1e-10 * max(1.0, abs(exact)):
            raise ConsistencyError(f"p_cav has imaginary residue {exact.imag:.3e}")
        value = exact.real

    if not -1e-10 <= value <= 1 + 1e-10:
        raise ConsistencyError(f"p_cav = {value} outside [0, 1]")
    return float(min(max(value, 0.0), 1.0))


def fwhm(params: CavityParams, fallback: bool = False, roots: Optional[EmitterRoots] = None) -> float:
    """Closed-form full width at half maximum (delta = 0, real mu)."""
    if params.delta != 0 or not params.real_mu_regime:
        if fallback:
            return numeric_fwhm(params)
        raise UnsupportedRegimeError(
            f"closed-form FWHM needs delta = 0 and g < (kappa-gamma)/(4 sqrt 2); "
            f"got g={params.g}, kappa={params.kappa}, gamma={params.gamma}, delta={params.delta}")

    roots = roots or emitter_roots(params)
    _require_decaying(params, roots)
    nu, mu = roots.nu.real, roots.mu.real
    return 2.0 * math.sqrt(-(nu ** 2 + mu ** 2) + math.sqrt(2.0 * (nu ** 4 + mu ** 4)))


def numeric_fwhm(params: CavityParams) -> float:
    """Half-maximum width of the dominant spectral peak, by root bracketing."""
    roots = emitter_roots(params)
    _require_decaying(params, roots)

    def spectrum(d):
        return float(emission_spectrum(params, d, roots=roots))

    reach = 10.0 * (params.kappa + params.gamma + params.g + abs(params.delta))
    probe = np.linspace(-reach, reach, 20001)
    values = emission_spectrum(params, probe, roots=roots)
    k = int(np.argmax(values))

    lo, hi = probe[max(k - 1, 0)], probe[min(k + 1, probe.size - 1)]
    refined = minimize_scalar(lambda d: -spectrum(d), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
    peak_at, peak = (refined.x, -refined.fun) if -refined.fun >= values[k] else (probe[k], values[k])
    half = peak / 2.0

    below = np.nonzero(values < half)[0]
    left, right = below[below < k], below[below > k]
    if not left.size or not right.size:
        raise TruncationError(f"half maximum not reached within +-{reach:g}")

    def excess(d):
        return spectrum(d) - half

    a = brentq(excess, probe[left[-1]], peak_at, xtol=1e-14, rtol=1e-14)
    b = brentq(excess, peak_at, probe[right[0]], xtol=1e-14, rtol=1e-14)
    return float(b - a)


def default_grid(params: CavityParams, n_points: int = 4001, width_factor: float = 40.0,
                 half_width: Optional[float] = None) -> FrequencyGrid:
    if half_width is None:
        half_width = width_factor * fwhm(params, fallback=True)
    return make_grid(half_width, n_points)


def spectral_amplitude(params: CavityParams, grid: FrequencyGrid,
                       roots: Optional[EmitterRoots] = None) -> SpectralFunction:
    """Unit-norm spectral amplitude of the emitted photon sampled on the grid."""
    roots = roots or emitter_roots(params)
    _require_decaying(params, roots)
    if params.g == 0:
        raise UnsupportedRegimeError("g = 0: nothing is emitted through the cavity")

    values = _transform(params, roots, grid.samples)

    # |F|^2 ~ c/delta^4 beyond the grid edge, so each tail holds |F(W)|^2 W / 3
    edges = np.abs(_transform(params, roots, np.array([-grid.half_width, grid.half_width]))) ** 2
    tail = float(np.sum(edges)) * grid.half_width / 3.0
    total = math.pi * loss_budget(params)[0] / params.kappa
    if tail > TRUNCATION_LIMIT * total:
        raise TruncationError(
            f"grid half width {grid.half_width:g} leaves {tail / total:.2e} of the spectrum outside")
    if tail > 1e-6 * total and (params, grid.half_width) not in _warned_tails:
        _warned_tails.add((params, grid.half_width))
        console.warn(f"spectral tail outside the grid is {tail / total:.1e} of the total")

    raw = SpectralFunction(grid, values)
    return SpectralFunction(grid, values / math.sqrt(raw.l2_norm), normalized=True)


def make_envelope(params: CavityParams):
    """Unit-norm photon envelope xi(t) in the cavity frame as a callable; zero before t = 0."""
    roots = emitter_roots(params)
    _require_decaying(params, roots)
    scale = math.sqrt(loss_budget(params)[0] / (2 * params.kappa))

    def envelope(t):
        t = np.asarray(t, dtype=float)
        causal = np.where(t > 0, t, 0.0)
        s_1 = emitter_amplitudes(params, causal, roots=roots).s_1
        return np.where(t >= 0, s_1 * np.exp(1j * params.delta * causal) / scale, 0.0)[()]

    return envelope


def temporal_envelope(params: CavityParams, t):
    return make_envelope(params)(t)
