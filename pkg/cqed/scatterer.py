"""
Cavity B: a polarized photon component of frequency omega hits the
one-sided cavity holding an atom in |g_L>.  The L component can be absorbed
and re-emitted as R (state swap); everything else reflects.

Basis order for intracavity amplitudes: (|e>, |g_L L>, |g_L R>, |g_R L>, |g_R R>),
frame rotating at omega, delta_omega = omega - omega_c, delta = omega_c - omega_e.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import expm, solve_continuous_lyapunov

from .classes import CavityParams
from .errors import DivergenceError
from .helpers import (exp_cosh, exp_cosh_minus_one, exp_sinhc, expint,
                      require_nonnegative_time)


@dataclass(frozen=True, eq=False)
class ScatterRoots:
    lam: complex
    eta: complex
    rho: complex
    delta_omega: float


@dataclass(frozen=True, eq=False)
class IntracavityAmplitudes:
    c_e: np.ndarray
    c_1: np.ndarray
    c_2: np.ndarray
    c_3: np.ndarray
    c_4: np.ndarray
    t: float
    delta_omega: np.ndarray
    alpha: complex
    beta: complex

    def as_vector(self) -> np.ndarray:
        return np.stack([self.c_e, self.c_1, self.c_2, self.c_3, self.c_4])


@dataclass(frozen=True, eq=False)
class OutputIntegrals:
    """C_j = -sqrt(kappa) * integral of c_j over [0, t]."""

    C_e: np.ndarray
    C_1: np.ndarray
    C_2: np.ndarray
    C_3: np.ndarray
    C_4: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.stack([self.C_e, self.C_1, self.C_2, self.C_3, self.C_4])


@dataclass(frozen=True, eq=False)
class ScatteredChannelAmplitudes:
    out_1: np.ndarray
    out_2: np.ndarray
    out_3: np.ndarray
    out_4: np.ndarray
    drive: OutputIntegrals
    t: float
    delta_omega: np.ndarray

    @property
    def outputs(self) -> np.ndarray:
        return np.stack([self.out_1, self.out_2, self.out_3, self.out_4])

    @property
    def output_norm(self):
        return np.sum(np.abs(self.outputs) ** 2, axis=0)


def scatter_roots(params: CavityParams, delta_omega) -> ScatterRoots:
    d = np.asarray(delta_omega, dtype=float)
    lam = -(-1j * params.delta - 2j * d + params.kappa / 2 + params.gamma / 2) / 2
    eta = np.sqrt(complex(((-1j * params.delta - params.kappa / 2 + params.gamma / 2) / 2) ** 2
                          - 2 * params.g ** 2))
    rho = (1j * d - params.kappa / 2) / 2
    return ScatterRoots(lam=lam, eta=eta, rho=rho, delta_omega=d)


def scatterer_generator(params: CavityParams, delta_omega: float) -> np.ndarray:
    """d c/dt = M c in the frame rotating at omega; M = -i H_eff."""
    a = 1j * (delta_omega + params.delta) - params.gamma / 2
    d = 1j * delta_omega - params.kappa / 2
    g = -1j * params.g
    return np.array([
        [a, g, 0, 0, g],
        [g, d, 0, 0, 0],
        [0, 0, d, 0, 0],
        [0, 0, 0, d, 0],
        [g, 0, 0, 0, d],
    ], dtype=complex)


def effective_hamiltonian(params: CavityParams, delta_omega: float) -> np.ndarray:
    return 1j * scatterer_generator(params, delta_omega)


def input_vector(alpha: complex, beta: complex) -> np.ndarray:
    return np.array([0, alpha, beta, 0, 0], dtype=complex)


def intracavity_amplitudes(params: CavityParams, delta_omega, t, alpha: complex, beta: complex,
                           roots: Optional[ScatterRoots] = None) -> IntracavityAmplitudes:
    require_nonnegative_time(t)
    r = roots or scatter_roots(params, delta_omega)
    sh = exp_sinhc(r.lam, r.eta, t)
    ch = exp_cosh(r.lam, r.eta, t)
    empty = np.exp(2 * r.rho * t)
    mixed = (2 * r.rho - r.lam) / 2 * sh + ch / 2

    c_e = -1j * alpha * params.g * sh
    c_1 = alpha * (mixed + empty / 2)
    c_4 = alpha * (mixed - empty / 2)
    c_2 = beta * empty
    return IntracavityAmplitudes(c_e=c_e, c_1=c_1, c_2=c_2, c_3=np.zeros_like(c_2), c_4=c_4,
                                 t=t, delta_omega=r.delta_omega, alpha=alpha, beta=beta)


def _coupled_integrals(r: ScatterRoots, t):
    """(int e^{lam s} sinh(eta s)/eta, int e^{lam s} cosh(eta s)) over [0, t]."""
    det = r.eta ** 2 - r.lam ** 2
    scale = np.maximum(1.0, np.maximum(np.abs(r.lam) ** 2, np.abs(r.eta) ** 2))
    degenerate = np.abs(det) < 1e-12 * scale

    if np.isinf(t):
        if np.any(degenerate):
            raise DivergenceError("a cavity-B mode does not decay; no steady state")
        return -1 / det, r.lam / det

    x = exp_cosh_minus_one(r.lam, r.eta, t)
    y = exp_sinhc(r.lam, r.eta, t)
    safe = np.where(degenerate, 1.0, det)
    i_sinh = (x - r.lam * y) / safe
    i_cosh = (r.eta ** 2 * y - r.lam * x) / safe
    if np.any(degenerate):
        up = expint(r.lam + r.eta, t)
        down = expint(r.lam - r.eta, t)
        eta = np.where(r.eta == 0, 1.0, r.eta)
        # eta -> 0 needs int s e^{lam s}; reached only with g = 0, handled by the caller
        i_sinh = np.where(degenerate, (up - down) / (2 * eta), i_sinh)
        i_cosh = np.where(degenerate, (up + down) / 2, i_cosh)
    return i_sinh, i_cosh


def _empty_integral(r: ScatterRoots, t):
    if np.isinf(t):
        return -1 / (2 * r.rho)
    return expint(2 * r.rho, t)


def output_time_integrals(params: CavityParams, delta_omega, t, alpha: complex, beta: complex,
                          roots: Optional[ScatterRoots] = None) -> OutputIntegrals:
    """Closed-form C_j(t); t = inf gives the steady state."""
    require_nonnegative_time(t)
    r = roots or scatter_roots(params, delta_omega)
    root_kappa = np.sqrt(params.kappa)
    empty = _empty_integral(r, t)

    if params.g == 0:
        # decoupled atom: |g_L L> behaves like the empty channel
        zero = np.zeros_like(empty)
        return OutputIntegrals(C_e=zero, C_1=-root_kappa * alpha * empty, C_2=-root_kappa * beta * empty,
                               C_3=zero, C_4=zero)

    if np.isinf(t) and np.any(np.real(r.lam) + np.abs(np.real(r.eta)) >= 0):
        raise DivergenceError(f"cavity B does not decay for {params.model_dump()}")

    i_sinh, i_cosh = _coupled_integrals(r, t)
    mixed = (2 * r.rho - r.lam) / 2 * i_sinh + i_cosh / 2
    return OutputIntegrals(
        C_e=-root_kappa * (-1j * alpha * params.g * i_sinh),
        C_1=-root_kappa * alpha * (mixed + empty / 2),
        C_2=-root_kappa * beta * empty,
        C_3=np.zeros_like(empty),
        C_4=-root_kappa * alpha * (mixed - empty / 2),
    )


def scatter_channel(params: CavityParams, delta_omega, t, alpha: complex, beta: complex,
                    roots: Optional[ScatterRoots] = None) -> ScatteredChannelAmplitudes:
    """Reflected channel amplitudes: direct reflection plus sqrt(kappa) C_j."""
    r = roots or scatter_roots(params, delta_omega)
    drive = output_time_integrals(params, delta_omega, t, alpha, beta, roots=r)
    root_kappa = np.sqrt(params.kappa)
    return ScatteredChannelAmplitudes(
        out_1=alpha + root_kappa * drive.C_1,
        out_2=beta + root_kappa * drive.C_2,
        out_3=root_kappa * drive.C_3,
        out_4=root_kappa * drive.C_4,
        drive=drive,
        t=t,
        delta_omega=r.delta_omega,
    )


def steady_state_reflection(params: CavityParams, delta_omega, alpha: complex,
                            beta: complex) -> ScatteredChannelAmplitudes:
    return scatter_channel(params, delta_omega, np.inf, alpha, beta)


def flux_balance(params: CavityParams, delta_omega, t, alpha: complex, beta: complex):
    """Residual of sum|out|^2 + d/dt |C|^2 + gamma |C_e|^2 - (|alpha|^2 + |beta|^2)."""
    r = scatter_roots(params, delta_omega)
    channel = scatter_channel(params, delta_omega, t, alpha, beta, roots=r)
    drive = channel.drive.as_vector()
    if np.isinf(t):
        rate = 0.0
    else:
        free = intracavity_amplitudes(params, delta_omega, t, alpha, beta, roots=r).as_vector()
        rate = 2 * np.real(np.sum(np.conj(drive) * (-np.sqrt(params.kappa) * free), axis=0))
    lost = params.gamma * np.abs(channel.drive.C_e) ** 2
    return channel.output_norm + rate + lost - (abs(alpha) ** 2 + abs(beta) ** 2)


def free_decay_balance(params: CavityParams, delta_omega: float, t: float, alpha: complex,
                       beta: complex) -> float:
    """Residual of |c(t)|^2 + kappa int sum|c_j|^2 + gamma int |c_e|^2 - |v|^2."""
    require_nonnegative_time(t)
    generator = scatterer_generator(params, delta_omega)
    v = input_vector(alpha, beta)[:, None]
    # int_0^t e^{Ms} v v^H e^{M^H s} ds = X - e^{Mt} X e^{M^H t}
    gram = solve_continuous_lyapunov(generator, -v @ v.conj().T)
    propagator = expm(generator * t)
    accumulated = gram - propagator @ gram @ propagator.conj().T
    losses = np.array([params.gamma] + [params.kappa] * 4)
    remaining = intracavity_amplitudes(params, delta_omega, t, alpha, beta).as_vector()
    total = np.sum(np.abs(remaining) ** 2) + np.sum(losses * np.real(np.diag(accumulated)))
    return float(total - (abs(alpha) ** 2 + abs(beta) ** 2))
