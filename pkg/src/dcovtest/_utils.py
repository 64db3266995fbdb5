"""BLAS-independent reductions shared across the package.

Results of every function here are bitwise reproducible regardless of how
many threads the ambient BLAS pool is allowed to use: ``np.einsum`` with
``optimize=False`` runs numpy's own sequential contraction loop, and the
eigensolver is pinned to a single BLAS thread.
"""
from __future__ import annotations

import numpy as np
from threadpoolctl import threadpool_limits


def det_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix product with a fixed, thread-independent summation order."""
    return np.einsum("ij,jk->ik", x, y, optimize=False)


def det_matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("ij,j->i", m, v, optimize=False)


def det_dot(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.einsum("i,i->", u, v, optimize=False))


def eigvalsh_deterministic(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending, single BLAS thread.

    LAPACK's blocked kernels can round differently depending on the thread
    count; pinning the pool to one thread makes repeated calls bit-identical.
    """
    with threadpool_limits(limits=1):
        return np.linalg.eigvalsh(m)
