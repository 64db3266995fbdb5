"""U- and V-statistic estimators of distance covariance.

Both consume a :class:`PairedSample` of marginal distance matrices over a
common index set.  The V-statistic is the plug-in value (distance covariance
of the empirical joint measure); the U-statistic is its unbiased counterpart,
averaging the product kernel over 6-tuples of distinct indices, and requires
n >= 7.  Naive counterparts enumerate tuples literally and exist as ground
truth for small n.
"""
from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction

import numpy as np

from . import kernels
from .distances import pairwise_distances

__all__ = [
    "SampleTooSmall",
    "PairedSample",
    "v_statistic",
    "u_statistic",
    "v_statistic_naive",
    "u_statistic_naive",
]


class SampleTooSmall(ValueError):
    """The requested estimator needs more sample points than were given."""


@dataclasses.dataclass(frozen=True)
class PairedSample:
    """Distance matrices of the X- and Y-coordinates of one paired sample.

    Row/column ``i`` of both matrices refers to the same observation.
    """

    dx: np.ndarray
    dy: np.ndarray

    def __post_init__(self):
        dx = np.asarray(self.dx, dtype=float)
        dy = np.asarray(self.dy, dtype=float)
        if dx.ndim != 2 or dx.shape[0] != dx.shape[1]:
            raise ValueError(f"dx must be square, got shape {dx.shape}")
        if dy.shape != dx.shape:
            raise ValueError(
                f"paired matrices must have equal shape, got {dx.shape} and {dy.shape}"
            )
        if dx.shape[0] < 1:
            raise ValueError("sample must contain at least one observation")
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)

    @property
    def n(self) -> int:
        return self.dx.shape[0]

    @classmethod
    def from_points(cls, x, y, metric_x: str = "euclidean", metric_y: str = "euclidean"):
        """Build the sample from coordinate arrays (rows are observations)."""
        dx = pairwise_distances(x, metric_x)
        dy = pairwise_distances(y, metric_y)
        if dx.shape != dy.shape:
            raise ValueError(
                f"x has {dx.shape[0]} observations but y has {dy.shape[0]}"
            )
        return cls(dx=dx, dy=dy)


def v_statistic(sample: PairedSample) -> float:
    """Plug-in (V-) estimate of distance covariance, O(n**2).

    Uses the three-sum identity

        V = mean(dx * dy) + mean(dx) mean(dy) - 2 mean_i[ rowmean_i(dx) * rowmean_i(dy) ]

    which equals the mean of the elementwise product of the double-centered
    matrices, and also the exact distance covariance of the empirical joint
    measure.  Non-negative whenever both marginal metrics are of negative
    type (up to rounding).

    >>> two = np.array([[0., 1], [1, 0]])
    >>> v_statistic(PairedSample(two, two))
    0.25
    """
    dx, dy = sample.dx, sample.dy
    n = sample.n
    term1 = float(np.sum(dx * dy)) / (n * n)
    term2 = float(dx.mean()) * float(dy.mean())
    rx = dx.mean(axis=1)
    ry = dy.mean(axis=1)
    term3 = (2.0 / n) * float(np.sum(rx * ry))
    return term1 + term2 - term3


def u_statistic(sample: PairedSample) -> float:
    """Unbiased (U-) estimate: the mean of the product kernel over all
    n(n-1)...(n-5) ordered 6-tuples of distinct indices.

    Evaluated in O(n**2) by inclusion-exclusion over set partitions of the
    six kernel slots, which rewrites the distinct-only sum as a combination
    of unrestricted contractions; the partition coefficients are combined in
    exact rational arithmetic because they involve n**6, which overflows
    double precision near n = 2000.

    Raises:
        SampleTooSmall: if n <= 6.
    """
    n = sample.n
    if n <= 6:
        raise SampleTooSmall(f"the U-statistic needs n >= 7, got n = {n}")
    ctx = kernels._PairContractions(sample.dx, sample.dy)
    n_falling = n * (n - 1) * (n - 2) * (n - 3) * (n - 4) * (n - 5)
    total = 0.0
    for sig, powers in kernels._table_distinct().items():
        coeff = Fraction(0)
        for blocks, weight in powers.items():
            coeff += weight * n ** blocks
        value, axes = ctx.signature_value(sig)
        if axes != "":
            raise AssertionError("distinct-sum table produced a non-scalar term")
        total += float(coeff / n_falling) * value
    return total


def v_statistic_naive(sample: PairedSample) -> float:
    """O(n**6) reference for :func:`v_statistic` (n <= 8): the literal mean
    of the kernel over all 6-tuples."""
    h6 = kernels._h_tensor(sample.dx, sample.dy)
    return float(h6.mean())


def u_statistic_naive(sample: PairedSample) -> float:
    """O(n**6) reference for :func:`u_statistic` (7 <= n <= 8): the literal
    mean over distinct 6-tuples."""
    n = sample.n
    if n <= 6:
        raise SampleTooSmall(f"the U-statistic needs n >= 7, got n = {n}")
    h6 = kernels._h_tensor(sample.dx, sample.dy)
    mask = _distinct_mask(n)
    n_falling = n * (n - 1) * (n - 2) * (n - 3) * (n - 4) * (n - 5)
    return float(h6[mask].sum()) / n_falling


def _distinct_mask(n: int) -> np.ndarray:
    idx = np.indices((n,) * 6)
    mask = np.ones((n,) * 6, dtype=bool)
    for i, j in itertools.combinations(range(6), 2):
        mask &= idx[i] != idx[j]
    return mask
