"""Distance matrices over finite samples.

Construction from coordinate arrays, validation of user-supplied matrices,
and the negative-type diagnostic that decides whether zero distance
covariance certifies independence on a given sample.
"""
from __future__ import annotations

import dataclasses

import numpy as np
from scipy.spatial.distance import cdist

from ._utils import eigvalsh_deterministic

__all__ = [
    "InvalidPointSet",
    "InvalidDistanceMatrix",
    "NegativeTypeReport",
    "as_point_set",
    "pairwise_distances",
    "validate_distance_matrix",
    "negative_type_check",
]

#: metric name accepted by this package -> metric name understood by scipy
_METRICS = {"euclidean": "euclidean", "manhattan": "cityblock"}


class InvalidPointSet(ValueError):
    """A coordinate array is empty, ragged, or contains non-finite values."""


class InvalidDistanceMatrix(ValueError):
    """A matrix fails symmetry, non-negativity, zero-diagonal, or (under
    strict validation) triangle-inequality checks."""


def as_point_set(points) -> np.ndarray:
    """Coerce ``points`` to a float array of shape ``(n, dim)``.

    One-dimensional input is interpreted as ``n`` points on the real line.

    Raises:
        InvalidPointSet: on empty input, ragged rows, more than two axes,
            or non-finite coordinates.
    """
    try:
        pts = np.asarray(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidPointSet(f"could not coerce points to floats: {exc}") from None
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise InvalidPointSet(f"expected a 2-d array of coordinates, got shape {pts.shape}")
    if pts.shape[0] == 0 or pts.shape[1] == 0:
        raise InvalidPointSet("point set must contain at least one point of dimension >= 1")
    if not np.isfinite(pts).all():
        raise InvalidPointSet("point coordinates must be finite")
    return pts


def pairwise_distances(points, metric: str = "euclidean") -> np.ndarray:
    """Dense ``(n, n)`` distance matrix for ``points`` under ``metric``.

    ``metric`` is ``"euclidean"`` or ``"manhattan"``.

    >>> pairwise_distances([(0.0,), (1.0,), (3.0,)])
    array([[0., 1., 3.],
           [1., 0., 2.],
           [3., 2., 0.]])
    """
    if metric not in _METRICS:
        raise ValueError(f"unsupported metric {metric!r}; choose from {sorted(_METRICS)}")
    pts = as_point_set(points)
    d = cdist(pts, pts, metric=_METRICS[metric])
    # cdist computes d(x_i, x_i) through the same floating-point path as the
    # off-diagonal entries; force the exact zeros the rest of the package
    # assumes.
    np.fill_diagonal(d, 0.0)
    return d


def validate_distance_matrix(matrix, level: str = "basic", tol: float = 1e-9) -> np.ndarray:
    """Validate ``matrix`` as a distance matrix and return a canonical copy.

    ``level="basic"`` checks squareness, finiteness, symmetry, non-negative
    entries, and a zero diagonal, each up to an absolute tolerance of
    ``tol * (1 + max_entry)``.  ``level="strict"`` additionally checks every
    triangle inequality ``d(i, j) <= d(i, k) + d(k, j)``.

    The returned array is exactly symmetric with an exactly zero diagonal and
    no negative entries, so downstream code never re-checks.
    """
    if level not in ("basic", "strict"):
        raise ValueError(f"level must be 'basic' or 'strict', got {level!r}")
    try:
        m = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidDistanceMatrix(f"could not coerce matrix to floats: {exc}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidDistanceMatrix(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise InvalidDistanceMatrix("distance matrix must be at least 1 x 1")
    if not np.isfinite(m).all():
        raise InvalidDistanceMatrix("distance matrix entries must be finite")

    atol = tol * (1.0 + float(np.abs(m).max()))
    asym = float(np.abs(m - m.T).max())
    if asym > atol:
        i, j = np.unravel_index(np.abs(m - m.T).argmax(), m.shape)
        raise InvalidDistanceMatrix(
            f"matrix is not symmetric: |d[{i},{j}] - d[{j},{i}]| = {asym:.3g} exceeds {atol:.3g}"
        )
    diag = np.abs(np.diagonal(m))
    if diag.max() > atol:
        i = int(diag.argmax())
        raise InvalidDistanceMatrix(f"diagonal entry d[{i},{i}] = {m[i, i]:.3g} is not zero")
    if m.min() < -atol:
        i, j = np.unravel_index(m.argmin(), m.shape)
        raise InvalidDistanceMatrix(f"negative entry d[{i},{j}] = {m[i, j]:.3g}")

    d = 0.5 * (m + m.T)
    np.fill_diagonal(d, 0.0)
    np.maximum(d, 0.0, out=d)

    if level == "strict":
        n = d.shape[0]
        for k in range(n):
            # violation matrix for intermediate point k
            slack = d - (d[:, k, None] + d[None, k, :])
            if slack.max() > atol:
                i, j = np.unravel_index(slack.argmax(), slack.shape)
                raise InvalidDistanceMatrix(
                    f"triangle inequality fails: d[{i},{j}] = {d[i, j]:.6g} > "
                    f"d[{i},{k}] + d[{k},{j}] = {d[i, k] + d[k, j]:.6g}"
                )
    return d


@dataclasses.dataclass(frozen=True)
class NegativeTypeReport:
    """Outcome of the negative-type diagnostic at one base point.

    ``is_negative_type_on_sample`` is the verdict, ``min_eigenvalue`` the
    smallest eigenvalue of the induced Gram-like matrix, and ``tolerance``
    the slack the verdict used.
    """

    is_negative_type_on_sample: bool
    min_eigenvalue: float
    base_point_index: int
    tolerance: float


def negative_type_check(matrix, base: int = 0, tol: float | None = None) -> NegativeTypeReport:
    """Decide whether the sampled metric looks of negative type.

    Builds ``K[i, j] = d(i, base) + d(j, base) - d(i, j)`` and reports whether
    its smallest eigenvalue is at least ``-tol``.  Positive semi-definiteness
    of ``K`` at any one base point is equivalent to the finite sample
    embedding isometrically (after the square root) into Hilbert space; the
    verdict does not depend on which base point is used, only the eigenvalue
    does.

    When ``tol`` is omitted it defaults to ``1e-9 * (1 + max |K|)``.

    A failed check means zero distance covariance no longer certifies
    independence on this sample.
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidDistanceMatrix(f"expected a square matrix, got shape {d.shape}")
    n = d.shape[0]
    if not 0 <= base < n:
        raise ValueError(f"base point index {base} out of range for n = {n}")
    col = d[:, base]
    k = col[:, None] + col[None, :] - d
    if tol is None:
        tol = 1e-9 * (1.0 + float(np.abs(k).max()))
    eigs = eigvalsh_deterministic(0.5 * (k + k.T))
    min_eig = float(eigs[0])
    return NegativeTypeReport(
        is_negative_type_on_sample=bool(min_eig >= -tol),
        min_eigenvalue=min_eig,
        base_point_index=base,
        tolerance=float(tol),
    )
