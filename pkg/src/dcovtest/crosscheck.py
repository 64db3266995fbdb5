"""Characteristic-function crosscheck for 1-D Euclidean samples.

For real-valued X and Y with the Euclidean metric, distance covariance has a
second, independent representation: a weighted L2 distance between the joint
empirical characteristic function and the product of the marginals,

    (1 / c_1**2) * integral |phi_XY(t, s) - phi_X(t) phi_Y(s)|**2 / (t**2 s**2) dt ds.

This module evaluates that integral by midpoint quadrature on the truncated
domain ([-R, -eps] u [eps, R])**2 and exists purely to cross-validate the
metric-space V-statistic through an unrelated computational route.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = ["QuadratureConfig", "c_constant", "dcov_charfn_1d"]


@dataclasses.dataclass(frozen=True)
class QuadratureConfig:
    """Truncated tensor-grid quadrature parameters.

    The integrand is bounded near the origin (the numerator is O(t**2 s**2))
    and O(1/(t**2 s**2)) in the tails, so an inner cutoff ``epsilon`` and an
    outer cutoff ``radius`` bound both truncation errors.  The defaults keep
    the total quadrature error under about 2% for samples of scale <= 3.
    """

    epsilon: float = 1e-3
    radius: float = 200.0
    grid: int = 2000

    def __post_init__(self):
        if not 0.0 < self.epsilon < self.radius:
            raise ValueError(
                f"need 0 < epsilon < radius, got epsilon={self.epsilon}, radius={self.radius}"
            )
        if self.grid < 16:
            raise ValueError(f"grid must be at least 16 points per axis, got {self.grid}")


def c_constant(k: int) -> float:
    """Normalizing constant ``pi**((1+k)/2) / gamma((1+k)/2)`` for dimension k.

    >>> c_constant(1) == math.pi
    True
    >>> round(c_constant(2) / math.pi, 12)  # 2*pi
    2.0
    """
    if k < 1:
        raise ValueError(f"dimension k must be a positive integer, got {k}")
    return math.pi ** ((1 + k) / 2) / math.gamma((1 + k) / 2)


def dcov_charfn_1d(x, y, q: QuadratureConfig = QuadratureConfig()) -> float:
    """Distance covariance of a paired 1-D sample via characteristic functions.

    Evaluates the empirical characteristic functions of the sample on a
    midpoint grid over ``([-R, -eps] u [eps, R])**2`` and integrates
    ``|phi_XY - phi_X phi_Y|**2 / (c_1**2 t**2 s**2)``.  The integrand is
    invariant under ``(t, s) -> (-t, -s)`` (conjugation), so only the
    half-plane ``t > 0`` is evaluated and doubled.

    Agrees with the V-statistic of the Euclidean distance matrices up to
    quadrature error (about 2% at the default config for samples of scale
    <= 3); the result is non-negative by construction.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"x and y must have equal length, got {x.size} and {y.size}")
    if x.size < 1:
        raise ValueError("need at least one observation")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("sample values must be finite")

    half = q.grid // 2
    step = (q.radius - q.epsilon) / half
    nodes = q.epsilon + step * (np.arange(half) + 0.5)

    ex = np.exp(1j * nodes[:, None] * x[None, :])   # (half, n): e^{i t x_j}
    ey = np.exp(1j * nodes[:, None] * y[None, :])   # (half, n): e^{i s y_j}
    phi_x = ex.mean(axis=1)
    phi_y = ey.mean(axis=1)

    n = x.size
    joint_pp = np.einsum("aj,bj->ab", ex, ey, optimize=False) / n
    joint_pm = np.einsum("aj,bj->ab", ex, ey.conj(), optimize=False) / n

    dev_pp = joint_pp - phi_x[:, None] * phi_y[None, :]
    dev_pm = joint_pm - phi_x[:, None] * phi_y.conj()[None, :]

    weight = 1.0 / (nodes[:, None] ** 2 * nodes[None, :] ** 2)
    cell = (np.abs(dev_pp) ** 2 + np.abs(dev_pm) ** 2) * weight
    integral = 2.0 * step * step * float(np.sum(cell))
    return integral / c_constant(1) ** 2
