#!/usr/bin/env python3
"""
Test script for grids, quadrature, unit conversion and the numeric kernels
"""
import math
import os
import sys

import numpy as np
import pandas as pd
import pytest

from cqed.classes import PhysicalUnits
from cqed.errors import ConfigurationError, DomainError
from cqed.helpers import (SERIES_CROSSOVER, SpectralFunction, exp_cosh, exp_cosh_minus_one, exp_sinhc,
                          expint, make_grid, parallel_map, read_csv, require_nonnegative_time,
                          simpson_weights, to_angular, write_csv)



def test_single_panel_simpson():
    grid = make_grid(1.0, 3)
    assert grid.samples.tolist() == [-1.0, 0.0, 1.0]
    assert grid.weights == pytest.approx([1 / 3, 4 / 3, 1 / 3], rel=1e-15)


@pytest.mark.parametrize("half_width,n_points", [(1.0, 3), (2.5, 101), (40.0, 4001)])
def test_grid_shape(half_width, n_points):
    grid = make_grid(half_width, n_points)
    assert grid.n_points == n_points
    assert np.all(np.diff(grid.samples) > 0)
    assert grid.samples == pytest.approx(-grid.samples[::-1], abs=1e-12)
    assert grid.samples[n_points // 2] == 0.0
    assert np.sum(grid.weights) == pytest.approx(2 * half_width, rel=1e-12)


@pytest.mark.parametrize("half_width,n_points", [(0.0, 3), (-1.0, 5), (1.0, 4), (1.0, 1), (math.inf, 5)])
def test_grid_rejects_bad_settings(half_width, n_points):
    with pytest.raises(ConfigurationError):
        make_grid(half_width, n_points)


def test_cubic_exactness():
    grid = make_grid(2.0, 11)
    x = grid.samples
    assert grid.integrate(x ** 3 + 2 * x ** 2 - x + 1) == pytest.approx(44 / 3, rel=1e-12)
    assert grid.integrate(x ** 3) == pytest.approx(0.0, abs=1e-12)


def test_simpson_weights_need_odd_count():
    assert np.sum(simpson_weights(5, 0.25)) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ConfigurationError):
        simpson_weights(4, 0.25)


def test_to_angular_rb87_rates():
    params = to_angular({"g": 1.2, "kappa": 15.0, "gamma": 1.5}, PhysicalUnits(mode="physical"))
    assert params.g == pytest.approx(2 * math.pi * 1.2)
    assert params.kappa == pytest.approx(2 * math.pi * 15.0)
    assert params.gamma == pytest.approx(2 * math.pi * 1.5)

    zero = to_angular({"g": 0.0, "kappa": 6.0, "gamma": 0.0}, PhysicalUnits(mode="physical"))
    assert zero.g == 0.0 and zero.gamma == 0.0


def test_to_angular_needs_physical_mode():
    with pytest.raises(ConfigurationError):
        to_angular({"g": 1.0, "kappa": 1.0, "gamma": 0.0}, PhysicalUnits())


def test_to_angular_validates_rates():
    with pytest.raises(ConfigurationError) as excinfo:
        to_angular({"g": 1.0, "kappa": 0.0, "gamma": 0.0}, PhysicalUnits(mode="physical"))
    assert "kappa" in str(excinfo.value)


def test_exp_sinhc_is_continuous_across_branches():
    lam = -0.3 + 0.2j
    t = 2.0
    for eta in (0.5 * SERIES_CROSSOVER / t, 2.0 * SERIES_CROSSOVER / t, 0.49 / t, 0.51 / t):
        direct = np.exp(lam * t) * np.sinh(eta * t) / eta
        assert exp_sinhc(lam, eta, t) == pytest.approx(direct, rel=1e-12)


def test_exp_sinhc_limits_and_symmetry():
    lam, t = -0.5 + 1j, 1.5
    assert exp_sinhc(lam, 0.0, t) == pytest.approx(t * np.exp(lam * t), rel=1e-15)
    for eta in (0.3 + 0.1j, 4.0j, 2.5):
        assert exp_sinhc(lam, -eta, t) == pytest.approx(exp_sinhc(lam, eta, t), rel=1e-12)
        assert exp_cosh(lam, -eta, t) == pytest.approx(exp_cosh(lam, eta, t), rel=1e-12)


def test_exp_sinhc_does_not_overflow():
    # sinh(800) overflows on its own; the product decays
    value = exp_sinhc(-1.0, 0.8, 1000.0)
    assert np.isfinite(value)
    assert value == pytest.approx(np.exp(-200.0) / 1.6, rel=1e-10)


def test_exp_cosh_minus_one_small_time():
    lam, eta, t = -1.0 + 0.5j, 0.7j, 1e-9
    expected = (lam + 0.0) * t
    assert exp_cosh_minus_one(lam, eta, t) == pytest.approx(expected, rel=1e-6)
    assert exp_cosh_minus_one(lam, eta, 3.0) == pytest.approx(np.exp(lam * 3.0) * np.cosh(eta * 3.0) - 1, rel=1e-12)


def test_expint():
    assert expint(0.0, 2.5) == pytest.approx(2.5)
    p = -0.5 + 2j
    assert expint(p, 3.0) == pytest.approx((np.exp(p * 3.0) - 1) / p, rel=1e-13)
    assert np.allclose(expint(np.array([0.0, p]), 1.0), [1.0, (np.exp(p) - 1) / p], rtol=1e-13)


def test_require_nonnegative_time():
    require_nonnegative_time(0.0)
    with pytest.raises(DomainError):
        require_nonnegative_time(np.array([0.0, -1e-3]))


def test_spectral_function_norm():
    grid = make_grid(3.0, 61)
    values = np.exp(-grid.samples ** 2) * (1 + 1j)
    spectrum = SpectralFunction(grid, values)
    assert spectrum.l2_norm == pytest.approx(float(np.sum(grid.weights * np.abs(values) ** 2)), rel=1e-12)
    assert spectrum.scaled(1j).l2_norm == pytest.approx(spectrum.l2_norm, rel=1e-12)


def test_parallel_map_keeps_order(monkeypatch):
    monkeypatch.setenv("CQED_THREADS", "4")
    assert parallel_map(lambda x: x * x, range(50)) == [x * x for x in range(50)]
    monkeypatch.setenv("CQED_THREADS", "1")
    assert parallel_map(lambda x: -x, [3, 1, 2]) == [-3, -1, -2]


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("CQED_THREADS", "many")
    with pytest.raises(ConfigurationError):
        parallel_map(str, [1, 2])


def test_csv_metadata_and_determinism(tmp_path):
    frame = pd.DataFrame({"x": [0.1, 0.2], "y": [1 / 3, 2 / 3]})
    first = write_csv(frame, str(tmp_path / "a" / "one.csv"), {"figure": "demo", "grid_points": 5})
    second = write_csv(frame, str(tmp_path / "b" / "one.csv"), {"figure": "demo", "grid_points": 5})
    with open(first) as f:
        text = f.read()
    with open(second) as f:
        assert f.read() == text
    assert text.startswith("# cqed_version:")
    assert "# grid_points: 5" in text
    assert read_csv(first)["y"].tolist() == pytest.approx([1 / 3, 2 / 3], rel=1e-11)


if __name__ == "__main__":
    sys.exit(pytest.main([os.path.abspath(__file__), "-v"]))
