import math

import numpy as np
import pytest

from dcovtest import (
    PairedSample,
    QuadratureConfig,
    c_constant,
    dcov_charfn_1d,
    v_statistic,
)


def test_c_constant_known_values():
    assert c_constant(1) == pytest.approx(math.pi, rel=1e-15)
    assert c_constant(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert c_constant(3) == pytest.approx(math.pi**2, rel=1e-15)


def test_c_constant_rejects_bad_dimension():
    with pytest.raises(ValueError):
        c_constant(0)


def test_quadrature_config_validation():
    with pytest.raises(ValueError, match="epsilon"):
        QuadratureConfig(epsilon=1.0, radius=0.5)
    with pytest.raises(ValueError, match="epsilon"):
        QuadratureConfig(epsilon=0.0)
    with pytest.raises(ValueError, match="grid"):
        QuadratureConfig(grid=8)


def test_two_point_example_matches_v():
    """x = y = (0, 1): the V-statistic is exactly 1/4 and the quadrature must
    land within 2% at the default config."""
    value = dcov_charfn_1d([0.0, 1.0], [0.0, 1.0])
    assert abs(value - 0.25) <= 0.02


def test_result_is_nonnegative():
    rng = np.random.default_rng(0)
    coarse = QuadratureConfig(grid=200)
    for _ in range(5):
        n = int(rng.integers(2, 10))
        x, y = rng.normal(size=n), rng.normal(size=n)
        assert dcov_charfn_1d(x, y, coarse) >= 0.0


def test_integrand_symmetric_under_joint_negation():
    """|phi_XY(t,s) - phi_X(t) phi_Y(s)|^2 / (t^2 s^2) is invariant under
    (t, s) -> (-t, -s); checked directly from the characteristic functions."""
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=8), rng.normal(size=8)

    def integrand(t, s):
        joint = np.mean(np.exp(1j * (t * x + s * y)))
        prod = np.mean(np.exp(1j * t * x)) * np.mean(np.exp(1j * s * y))
        return abs(joint - prod) ** 2 / (t * t * s * s)

    for t, s in ((0.3, 1.7), (2.0, -0.4), (-5.0, 5.0)):
        assert integrand(t, s) == pytest.approx(integrand(-t, -s), rel=1e-12)


def test_agrees_with_v_statistic_on_random_samples():
    rng = np.random.default_rng(2)
    for _ in range(3):
        n = int(rng.integers(2, 21))
        x = rng.normal(size=n)
        y = 0.5 * x + rng.normal(size=n) * 0.5
        v = v_statistic(PairedSample.from_points(x[:, None], y[:, None]))
        value = dcov_charfn_1d(x, y)
        assert abs(value - v) <= 0.02 * (1.0 + v)


def test_finer_grid_reduces_error():
    x = np.array([0.0, 0.7, 1.3])
    y = np.array([0.2, -0.5, 0.9])
    v = v_statistic(PairedSample.from_points(x[:, None], y[:, None]))
    coarse = abs(dcov_charfn_1d(x, y, QuadratureConfig(grid=64)) - v)
    fine = abs(dcov_charfn_1d(x, y, QuadratureConfig(grid=1024)) - v)
    assert fine <= coarse + 1e-12


def test_input_validation():
    with pytest.raises(ValueError, match="equal length"):
        dcov_charfn_1d([0.0, 1.0], [0.0])
    with pytest.raises(ValueError, match="finite"):
        dcov_charfn_1d([0.0, np.nan], [0.0, 1.0])
    with pytest.raises(ValueError, match="one observation"):
        dcov_charfn_1d([], [])
