"""
Shared numeric helpers: frequency grids, quadrature, unit conversion,
exponential/hyperbolic kernels that stay finite near removable singularities,
the sweep worker pool and CSV output.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional

import numpy as np
import pandas as pd

from . import __version__
from .classes import TWO_PI, CavityParams, PhysicalUnits, validated
from .errors import ConfigurationError

# |x t| below this uses the series sinh(x t)/x = t (1 + (x t)^2 / 6)
SERIES_CROSSOVER = 1e-4


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Uniform symmetric grid of offsets delta_omega = omega - omega_c with Simpson weights."""

    samples: np.ndarray
    weights: np.ndarray
    half_width: float
    n_points: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    def integrate(self, values) -> complex:
        # fixed pairwise order through np.sum keeps results bit-stable
        return np.sum(self.weights * np.asarray(values))


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    grid: FrequencyGrid
    values: np.ndarray
    normalized: bool = False
    l2_norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "l2_norm", float(self.grid.integrate(np.abs(self.values) ** 2)))

    def scaled(self, factor: complex) -> "SpectralFunction":
        return SpectralFunction(self.grid, self.values * factor, self.normalized and abs(abs(factor) - 1) < 1e-15)


def make_grid(half_width: float, n_points: int) -> FrequencyGrid:
    if not np.isfinite(half_width) or half_width <= 0:
        raise ConfigurationError(f"half width must be positive, got {half_width}", field="grid.half_width")
    if n_points < 3 or n_points % 2 == 0:
        raise ConfigurationError(f"Simpson needs an odd count >= 3, got {n_points}", field="grid.n_points")

    samples = np.linspace(-half_width, half_width, n_points)
    samples[n_points // 2] = 0.0
    h = 2.0 * half_width / (n_points - 1)
    weights = np.full(n_points, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    weights *= h / 3.0
    return FrequencyGrid(samples=samples, weights=weights, half_width=float(half_width), n_points=n_points)


def simpson_weights(n_points: int, step: float) -> np.ndarray:
    """Composite Simpson weights for an odd number of equally spaced samples."""
    if n_points < 3 or n_points % 2 == 0:
        raise ConfigurationError(f"Simpson needs an odd count >= 3, got {n_points}", field="n_times")
    weights = np.full(n_points, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return weights * step / 3.0


def to_angular(rates_over_2pi: Mapping[str, float], units: PhysicalUnits) -> CavityParams:
    """Convert rates given as r/2pi in MHz to angular frequency in rad/us."""
    if units.mode != "physical":
        raise ConfigurationError("conversion to angular units needs physical mode", field="units.mode")
    converted = {key: TWO_PI * float(value) for key, value in rates_over_2pi.items()}
    return validated(CavityParams, converted)


def exp_sinhc(lam, eta, t):
    """e^{lam t} sinh(eta t)/eta, even in eta, finite at eta -> 0."""
    lam, eta, t = np.broadcast_arrays(np.asarray(lam, dtype=complex),
                                      np.asarray(eta, dtype=complex),
                                      np.asarray(t, dtype=float))
    z = eta * t
    size = np.abs(z)
    out = np.empty(z.shape, dtype=complex)

    tiny = size < SERIES_CROSSOVER
    small = ~tiny & (size < 1.0)
    large = size >= 1.0

    out[tiny] = np.exp(lam[tiny] * t[tiny]) * t[tiny] * (1.0 + z[tiny] ** 2 / 6.0)
    out[small] = np.exp(lam[small] * t[small]) * np.sinh(z[small]) / eta[small]
    # split exponentials: no overflow of sinh against a decaying prefactor
    lg, eg, tg = lam[large], eta[large], t[large]
    out[large] = (np.exp((lg + eg) * tg) - np.exp((lg - eg) * tg)) / (2.0 * eg)
    return out[()]


def exp_cosh(lam, eta, t):
    """e^{lam t} cosh(eta t), even in eta."""
    lam, eta, t = np.broadcast_arrays(np.asarray(lam, dtype=complex),
                                      np.asarray(eta, dtype=complex),
                                      np.asarray(t, dtype=float))
    z = eta * t
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < 1.0
    out[small] = np.exp(lam[small] * t[small]) * np.cosh(z[small])
    lg, eg, tg = lam[~small], eta[~small], t[~small]
    out[~small] = 0.5 * (np.exp((lg + eg) * tg) + np.exp((lg - eg) * tg))
    return out[()]


def exp_cosh_minus_one(lam, eta, t):
    """e^{lam t} cosh(eta t) - 1 without cancellation at small t."""
    lam, eta, t = np.broadcast_arrays(np.asarray(lam, dtype=complex),
                                      np.asarray(eta, dtype=complex),
                                      np.asarray(t, dtype=float))
    z = eta * t
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) < 1.0
    zs = z[small]
    out[small] = np.expm1(lam[small] * t[small]) * np.cosh(zs) + 2.0 * np.sinh(zs / 2.0) ** 2
    out[~small] = exp_cosh(lam[~small], eta[~small], t[~small]) - 1.0
    return out[()]


def expint(p, t):
    """Integral of e^{p s} over [0, t]; the degenerate exponent p = 0 gives t."""
    p, t = np.broadcast_arrays(np.asarray(p, dtype=complex), np.asarray(t, dtype=float))
    z = p * t
    out = np.empty(z.shape, dtype=complex)
    tiny = np.abs(z) < 1e-10
    out[tiny] = t[tiny] * (1.0 + z[tiny] / 2.0)
    out[~tiny] = np.expm1(z[~tiny]) / p[~tiny]
    return out[()]


def require_nonnegative_time(t) -> None:
    from .errors import DomainError
    if np.any(np.asarray(t, dtype=float) < 0):
        raise DomainError(f"time must be non-negative, got {np.min(t)}")


def worker_count() -> int:
    raw = os.getenv("CQED_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigurationError(f"expected an integer, got '{raw}'", field="CQED_THREADS")
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Iterable, max_workers: Optional[int] = None) -> List:
    """Map over a thread pool; results come back in input order."""
    items = list(items)
    workers = min(max_workers or worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def write_csv(frame: pd.DataFrame, path: str, metadata: Dict) -> str:
    """Write '# key: value' provenance lines followed by the frame."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(f"# cqed_version: {__version__}\n")
        for key, value in metadata.items():
            f.write(f"# {key}: {value}\n")
        frame.to_csv(f, index=False, float_format="%.12g", lineterminator="\n")
    return path


def read_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
