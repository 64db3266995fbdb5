"""Double-centering of distance matrices and exact distance covariance for
finitely supported measures.

The empirical functions treat the rows of a matrix as a uniform sample; the
weighted functions take an explicit probability vector over the support and
are the ground truth the sampling-based estimators are tested against.
"""
from __future__ import annotations

import dataclasses

import numpy as np

__all__ = [
    "CenteredMatrix",
    "DiscreteJointMeasure",
    "a_mu_empirical",
    "grand_mean",
    "double_center",
    "double_center_weighted",
    "dcov_discrete",
    "dvar_discrete",
]

#: support points with less mass than this are dropped before centering
WEIGHT_PRUNE_THRESHOLD = 1e-15


@dataclasses.dataclass(frozen=True)
class CenteredMatrix:
    """A distance matrix after double centering.

    ``centered`` is ``d(i, j) - a[i] - a[j] + g`` where ``a`` holds the row
    means and ``g`` the grand mean; every row and column of ``centered`` sums
    to zero up to rounding.
    """

    centered: np.ndarray
    row_means: np.ndarray
    grand_mean: float

    @property
    def n(self) -> int:
        return self.centered.shape[0]


def a_mu_empirical(matrix: np.ndarray) -> np.ndarray:
    """Row means of a distance matrix: distance from each point to the sample.

    >>> a_mu_empirical(np.array([[0., 1, 3], [1, 0, 2], [3, 2, 0]]))
    array([1.33333333, 1.        , 1.66666667])
    """
    return np.asarray(matrix, dtype=float).mean(axis=1)


def grand_mean(matrix: np.ndarray) -> float:
    """Mean of all entries: expected distance between two sample points."""
    return float(np.asarray(matrix, dtype=float).mean())


def double_center(matrix: np.ndarray) -> CenteredMatrix:
    """Center a distance matrix under the uniform empirical measure.

    >>> double_center(np.array([[0., 1], [1, 0]])).centered
    array([[-0.5,  0.5],
           [ 0.5, -0.5]])
    """
    d = np.asarray(matrix, dtype=float)
    a = d.mean(axis=1)
    g = float(d.mean())
    return CenteredMatrix(centered=d - a[:, None] - a[None, :] + g, row_means=a, grand_mean=g)


def double_center_weighted(matrix: np.ndarray, weights: np.ndarray) -> CenteredMatrix:
    """Center a distance matrix under an explicit probability vector."""
    d = np.asarray(matrix, dtype=float)
    w = np.asarray(weights, dtype=float)
    a = (d * w[None, :]).sum(axis=1)
    g = float((a * w).sum())
    return CenteredMatrix(centered=d - a[:, None] - a[None, :] + g, row_means=a, grand_mean=g)


@dataclasses.dataclass(frozen=True)
class DiscreteJointMeasure:
    """A joint law on a finite support, given by marginal distance matrices
    over the support points and one probability per support point.

    Weights below ``WEIGHT_PRUNE_THRESHOLD`` are pruned at construction (with
    the corresponding rows and columns) and the rest renormalized, so the
    stored vector sums to one exactly up to rounding.
    """

    dx: np.ndarray
    dy: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        dx = np.asarray(self.dx, dtype=float)
        dy = np.asarray(self.dy, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if dx.ndim != 2 or dx.shape[0] != dx.shape[1]:
            raise ValueError(f"dx must be square, got shape {dx.shape}")
        if dy.shape != dx.shape:
            raise ValueError(f"dx and dy shapes differ: {dx.shape} vs {dy.shape}")
        if w.ndim != 1 or w.shape[0] != dx.shape[0]:
            raise ValueError(f"weights shape {w.shape} does not match support size {dx.shape[0]}")
        if not np.isfinite(w).all() or w.min() < 0.0:
            raise ValueError("weights must be finite and non-negative")
        total = float(w.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        keep = w >= WEIGHT_PRUNE_THRESHOLD
        if not keep.any():
            raise ValueError("all weights fell below the pruning threshold")
        if not keep.all():
            dx = dx[np.ix_(keep, keep)]
            dy = dy[np.ix_(keep, keep)]
            w = w[keep]
        w = w / w.sum()
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)
        object.__setattr__(self, "weights", w)

    @property
    def support_size(self) -> int:
        return self.weights.shape[0]


def dcov_discrete(theta: DiscreteJointMeasure) -> float:
    """Exact distance covariance of a finitely supported joint law.

    Centers each marginal under the support weights and returns
    ``sum_{k,l} w_k w_l dmu(k, l) dnu(k, l)``.  Zero for any product measure
    with non-degenerate marginals only certifies independence when both
    marginals are of negative type.
    """
    w = theta.weights
    da = double_center_weighted(theta.dx, w).centered
    db = double_center_weighted(theta.dy, w).centered
    return float(((w[:, None] * w[None, :]) * da * db).sum())


def dvar_discrete(matrix: np.ndarray, weights: np.ndarray) -> float:
    """Exact distance variance of one finitely supported marginal.

    Equals ``dcov`` of the marginal paired with itself; zero exactly when the
    measure is concentrated at one point.
    """
    theta = DiscreteJointMeasure(dx=matrix, dy=matrix, weights=np.asarray(weights, dtype=float))
    return dcov_discrete(theta)
