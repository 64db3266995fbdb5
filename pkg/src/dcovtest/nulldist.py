"""Null distributions for the scaled distance-covariance statistics.

Two routes to the same limit law (a centered weighted sum of chi-squared
variables):

* ``bootstrap_null`` resamples the empirically centered degree-two kernel
  matrix, mimicking n times the U-statistic under independence;
* ``spectral_eigenvalues`` + ``sample_weighted_chisq`` estimate the weights
  of the limit law directly from the spectrum of the Hadamard product of the
  double-centered marginals and simulate it.

All randomness flows through ``numpy.random.SeedSequence`` so draws are
reproducible bit for bit from the seed alone, independent of thread count.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np

from ._utils import eigvalsh_deterministic
from .centering import double_center
from .estimators import PairedSample
from .kernels import h2_empirical_matrix

__all__ = [
    "NullDistribution",
    "SpectralModel",
    "bootstrap_null",
    "spectral_eigenvalues",
    "sample_weighted_chisq",
    "quantile",
]

#: eigenvalues smaller than this fraction of the spectral scale are dropped
EIGENVALUE_RTOL = 1e-12


@dataclasses.dataclass(frozen=True)
class NullDistribution:
    """Monte Carlo draws approximating a null law, sorted ascending."""

    draws: np.ndarray
    method: str
    seed: int
    m: int

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float)
        if draws.ndim != 1 or draws.shape[0] != self.m:
            raise ValueError(f"expected {self.m} draws, got shape {draws.shape}")
        object.__setattr__(self, "draws", np.sort(draws))


@dataclasses.dataclass(frozen=True)
class SpectralModel:
    """Estimated weights of the limit law ``sum_i lambda_i (W_i^2 - 1) + shift``.

    ``lambdas`` is ordered by decreasing magnitude and truncated;
    ``eigenvalue_sum`` keeps the untruncated sum, which equals the mean of
    the diagonal product of the centered matrices (a useful audit).
    """

    lambdas: np.ndarray
    shift: float
    eigenvalue_sum: float
    law: str = "u"


def bootstrap_null(sample: PairedSample, m: int = 1000, seed: int = 0) -> NullDistribution:
    """Draw ``m`` bootstrap replicates of the scaled U-statistic's null law.

    Each replicate resamples n indices with replacement and evaluates
    ``(30 / n) * sum_{k < l} H[i_k, i_l]`` on the empirically centered
    degree-two kernel matrix ``H``.  Replicate ``j`` uses the child seed
    ``SeedSequence(seed, spawn_key=(j,))``, so any prefix of the replicate
    stream is reproducible.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    n = sample.n
    h = h2_empirical_matrix(sample.dx, sample.dy)
    draws = np.empty(m)
    for j in range(m):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(j,)))
        idx = rng.integers(0, n, size=n)
        sub = h[np.ix_(idx, idx)]
        pair_sum = 0.5 * (float(np.sum(sub)) - float(np.trace(sub)))
        draws[j] = (30.0 / n) * pair_sum
    return NullDistribution(draws=draws, method="bootstrap", seed=seed, m=m)


def spectral_eigenvalues(sample: PairedSample, law: str = "u") -> SpectralModel:
    """Spectral plug-in for the limit law of the scaled statistic.

    Computes the eigenvalues of ``M = (1/n) (dx_centered * dy_centered)``
    (elementwise product).  Eigenvalues with magnitude below
    ``EIGENVALUE_RTOL * n * max|M|`` are dropped.  ``law="u"`` centers the
    limit at zero; ``law="v"`` shifts it by the product of the marginal mean
    distances, matching the scaled V-statistic.
    """
    if law not in ("u", "v"):
        raise ValueError(f"law must be 'u' or 'v', got {law!r}")
    n = sample.n
    cx = double_center(sample.dx)
    cy = double_center(sample.dy)
    m = (cx.centered * cy.centered) / n
    eigs = eigvalsh_deterministic(m)
    eig_sum = float(np.sum(eigs))
    scale = float(np.abs(m).max()) * n
    keep = eigs[np.abs(eigs) > EIGENVALUE_RTOL * scale]
    order = np.argsort(-np.abs(keep), kind="stable")
    shift = cx.grand_mean * cy.grand_mean if law == "v" else 0.0
    return SpectralModel(
        lambdas=keep[order], shift=float(shift), eigenvalue_sum=eig_sum, law=law
    )


def sample_weighted_chisq(model: SpectralModel, m: int = 4000, seed: int = 0) -> NullDistribution:
    """Simulate ``sum_i lambda_i (W_i^2 - 1) + shift`` with iid standard
    normal ``W_i``, ``m`` independent draws."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    lam = np.asarray(model.lambdas, dtype=float)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if lam.size == 0:
        draws = np.full(m, model.shift)
    else:
        w = rng.standard_normal((m, lam.size))
        draws = ((w * w - 1.0) * lam).sum(axis=1) + model.shift
    return NullDistribution(draws=draws, method=f"spectral_{model.law}", seed=seed, m=m)


def quantile(null: NullDistribution, p: float) -> float:
    """Order-statistic quantile: the ``ceil(p * m)``-th smallest draw.

    A tiny downward nudge protects the ceiling from floating-point wobble
    when ``p * m`` is an exact integer in real arithmetic.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be strictly between 0 and 1, got {p}")
    m = null.m
    rank = math.ceil(p * m - 1e-9)
    rank = min(max(rank, 1), m)
    return float(null.draws[rank - 1])
