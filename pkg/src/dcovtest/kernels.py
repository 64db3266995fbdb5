"""Degree-six product kernels for distance covariance.

The raw kernel ``h`` multiplies one four-point evaluation of ``f`` on the
X-side distances with one on the Y-side, sharing the first two arguments:

    h(z1..z6) = f_A(z1, z2, z3, z4) * f_B(z1, z2, z5, z6),
    f_d(p, q, r, s) = d(p, q) - d(p, r) - d(q, s) + d(r, s).

``h`` is not symmetric; its symmetrization ``h_bar`` over all 720 argument
orders is, and everything downstream (U/V estimators, the bootstrap kernel
matrix, the canonical projections) is built from ``h_bar``.

Averaging ``h_bar`` over sample completions naively costs O(n**6).  This
module instead expands the 720-term symmetrization of the 16 product
monomials into a small table of canonical contraction patterns, each
evaluated from row means and at most one matrix product, which brings the
kernel matrix down to O(n**3) and the scalar statistics to O(n**2).  The
naive tensor forms are kept (size-guarded) as ground truth for tests.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

__all__ = [
    "f_dist",
    "h_kernel",
    "h_bar",
    "h_c_empirical",
    "h_k_canonical",
    "h_k_tensor",
    "h_mc",
    "h2_empirical_matrix",
    "h2_empirical_matrix_naive",
]

#: largest n for which the naive O(n**6) tensors may be materialized
NAIVE_MAX_N = 8

# signed index pairs of f_d(p, q, r, s) over argument slots (0, 1, 2, 3)
_F_TERMS = (((0, 1), 1), ((0, 2), -1), ((1, 3), -1), ((2, 3), 1))
# h-argument slots feeding the B-side copy of f
_B_SLOTS = (0, 1, 4, 5)


def f_dist(d: np.ndarray, p: int, q: int, r: int, s: int) -> float:
    """Four-point evaluation ``d(p,q) - d(p,r) - d(q,s) + d(r,s)``."""
    return float(d[p, q] - d[p, r] - d[q, s] + d[r, s])


def h_kernel(a: np.ndarray, b: np.ndarray, t) -> float:
    """Raw product kernel at a 6-tuple ``t`` of row indices.

    >>> two = np.array([[0., 1], [1, 0]])
    >>> h_kernel(two, two, (0, 1, 0, 1, 0, 1))
    4.0
    """
    t = tuple(t)
    if len(t) != 6:
        raise ValueError(f"h takes a 6-tuple of indices, got {len(t)}")
    return f_dist(a, t[0], t[1], t[2], t[3]) * f_dist(b, t[0], t[1], t[4], t[5])


def h_bar(a: np.ndarray, b: np.ndarray, t) -> float:
    """Symmetrized kernel: mean of ``h_kernel`` over all 720 orders of ``t``."""
    t = tuple(t)
    if len(t) != 6:
        raise ValueError(f"h_bar takes a 6-tuple of indices, got {len(t)}")
    total = 0.0
    for perm in itertools.permutations(t):
        total += h_kernel(a, b, perm)
    return total / 720.0


# ---------------------------------------------------------------------------
# symbolic expansion of the symmetrized kernel
#
# A term of h is A[s1, s2] * B[s3, s4] for argument slots s*.  Averaging over
# permutations and then over sample completions turns each slot into a role:
# a fixed output index, or a free index averaged over the sample.  Terms whose
# role patterns coincide up to swapping the ends of a pair (the matrices are
# symmetric) and renaming free indices have equal averages, so the 720 * 16
# raw terms collapse to a small weighted table of canonical signatures.

_FIX0 = ("!", 0)  # first fixed output index  -> einsum letter "i"
_FIX1 = ("!", 1)  # second fixed output index -> einsum letter "j"


def _is_free(token) -> bool:
    return token[0] == "f"


@lru_cache(maxsize=None)
def _h_terms():
    """The 16 signed monomials ``sign * A[pair] * B[pair]`` making up h."""
    terms = []
    for (pa, sa) in _F_TERMS:
        for (pb, sb) in _F_TERMS:
            bpair = (_B_SLOTS[pb[0]], _B_SLOTS[pb[1]])
            terms.append((pa, bpair, sa * sb))
    return tuple(terms)


def _canonical_signature(a_pair, b_pair):
    """Least representative of a role-token signature under pair swaps and
    free-index renaming."""
    best = None
    for a_swap in (False, True):
        pa = a_pair[::-1] if a_swap else a_pair
        for b_swap in (False, True):
            pb = b_pair[::-1] if b_swap else b_pair
            rename = {}
            flat = []
            for tok in (*pa, *pb):
                if _is_free(tok):
                    if tok not in rename:
                        rename[tok] = len(rename)
                    flat.append(("f", rename[tok]))
                else:
                    flat.append(tok)
            key = tuple(flat)
            if best is None or key < best:
                best = key
    return (best[0], best[1]), (best[2], best[3])


def _hbar_table(roles):
    """Signature -> weight for the 720-fold symmetrization of h, with h's six
    argument slots assigned the given role tokens."""
    table = {}
    for perm in itertools.permutations(range(6)):
        for a_pair, b_pair, sign in _h_terms():
            ra = (roles[perm[a_pair[0]]], roles[perm[a_pair[1]]])
            rb = (roles[perm[b_pair[0]]], roles[perm[b_pair[1]]])
            sig = _canonical_signature(ra, rb)
            table[sig] = table.get(sig, Fraction(0)) + Fraction(sign, 720)
    return {sig: w for sig, w in table.items() if w != 0}


@lru_cache(maxsize=None)
def _table_two_fixed():
    return _hbar_table((_FIX0, _FIX1, ("f", 2), ("f", 3), ("f", 4), ("f", 5)))


@lru_cache(maxsize=None)
def _table_one_fixed():
    return _hbar_table((_FIX0, ("f", 1), ("f", 2), ("f", 3), ("f", 4), ("f", 5)))


@lru_cache(maxsize=None)
def _table_all_free():
    return _hbar_table(tuple(("f", k) for k in range(6)))


def _set_partitions(items):
    """All partitions of ``items`` into non-empty blocks, deterministic order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1:]
        yield [[first]] + part


@lru_cache(maxsize=None)
def _table_distinct():
    """Signature -> {block count: weight} expressing the sum of h over
    6-tuples of *distinct* indices via complete sums.

    Inclusion-exclusion over set partitions of the six slots: merging the
    slots of each block and weighting by the Moebius function of the
    partition lattice converts unrestricted sums (which the contraction
    engine evaluates) into the distinct-only sum; the weight of a merged
    term carries a factor n**blocks that must stay exact, hence Fractions.
    """
    table = {}
    for part in _set_partitions(list(range(6))):
        block_of = {}
        moebius = 1
        for b, block in enumerate(part):
            moebius *= (-1) ** (len(block) - 1) * factorial(len(block) - 1)
            for slot in block:
                block_of[slot] = b
        for a_pair, b_pair, sign in _h_terms():
            ra = (("f", block_of[a_pair[0]]), ("f", block_of[a_pair[1]]))
            rb = (("f", block_of[b_pair[0]]), ("f", block_of[b_pair[1]]))
            sig = _canonical_signature(ra, rb)
            powers = table.setdefault(sig, {})
            key = len(part)
            powers[key] = powers.get(key, Fraction(0)) + Fraction(sign * moebius)
    return {
        sig: {b: w for b, w in powers.items() if w != 0}
        for sig, powers in table.items()
        if any(w != 0 for w in powers.values())
    }


class _PairContractions:
    """Evaluates canonical signatures against one (A, B) matrix pair.

    Free indices private to a single matrix axis are averaged into row means;
    whatever remains is contracted with a fixed-order einsum, so every result
    is independent of BLAS threading.  Components are cached per instance, and
    instances are shared across the tables evaluated for one statistic.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray):
        self.n = a.shape[0]
        self.mats = {"A": a, "B": b}
        self._cache: dict = {}

    def signature_value(self, sig):
        """Value of a signature as ``(array_or_float, axes)`` with axes one of
        '', 'i', 'j', 'ij'."""
        a_pair, b_pair = sig
        free_a = {t for t in a_pair if _is_free(t)}
        free_b = {t for t in b_pair if _is_free(t)}
        if free_a & free_b:
            parts = [self._component((("A", a_pair), ("B", b_pair)))]
        else:
            parts = [
                self._component((("A", a_pair),)),
                self._component((("B", b_pair),)),
            ]
        if len(parts) == 1:
            return parts[0]
        (v1, ax1), (v2, ax2) = parts
        axes = "".join(sorted(set(ax1) | set(ax2)))
        return _broadcast_axes(v1, ax1, axes) * _broadcast_axes(v2, ax2, axes), axes

    def _component(self, factors):
        key = _component_key(factors)
        hit = self._cache.get(key)
        if hit is not None:
            return hit

        ops = []
        axes = []
        for name, (t1, t2) in factors:
            m = self.mats[name]
            if t1 == t2:
                # both ends of the pair carry the same free index: a loop,
                # which only the diagonal survives
                ops.append(np.ascontiguousarray(np.diagonal(m)))
                axes.append([t1])
            else:
                ops.append(m)
                axes.append([t1, t2])

        free_counts = Counter(t for ax in axes for t in ax if _is_free(t))
        total_free = len(free_counts)
        # average out free indices seen on exactly one axis
        for i in range(len(ops)):
            for tok in [t for t in axes[i] if _is_free(t) and free_counts[t] == 1]:
                pos = axes[i].index(tok)
                ops[i] = ops[i].mean(axis=pos)
                axes[i].pop(pos)

        letters = {_FIX0: "i", _FIX1: "j"}
        next_free = iter("abcd")
        subs = []
        for ax in axes:
            for tok in ax:
                if tok not in letters:
                    letters[tok] = next(next_free)
            subs.append("".join(letters[t] for t in ax))
        out = "".join(
            letters[t] for t in (_FIX0, _FIX1)
            if any(t in ax for ax in axes)
        )
        remaining_free = {t for ax in axes for t in ax if _is_free(t)}

        if all(s == "" for s in subs):
            value = 1.0
            for op in ops:
                value *= float(op)
        else:
            value = np.einsum(",".join(subs) + "->" + out, *ops, optimize=False)
            if out == "":
                value = float(value)
        value = value / self.n ** len(remaining_free)

        self._cache[key] = (value, out)
        return value, out


def _component_key(factors):
    """Cache key for a connected component, canonical under pair swaps and
    free-index renaming (the matrices are symmetric, so swaps are free)."""
    names = tuple(name for name, _ in factors)
    pairs = [pair for _, pair in factors]
    best = None
    for mask in range(1 << len(pairs)):
        rename: dict = {}
        flat = []
        for i, pair in enumerate(pairs):
            cand = pair[::-1] if (mask >> i) & 1 else pair
            for tok in cand:
                if _is_free(tok):
                    if tok not in rename:
                        rename[tok] = len(rename)
                    flat.append(("f", rename[tok]))
                else:
                    flat.append(tok)
        key = (names, tuple(flat))
        if best is None or key < best:
            best = key
    return best


def _broadcast_axes(value, axes, want):
    """Reshape ``value`` (indexed by ``axes``) to broadcast over ``want``."""
    if axes == want or axes == "":
        return value
    if want == "ij":
        return value[:, None] if axes == "i" else value[None, :]
    raise AssertionError(f"cannot broadcast axes {axes!r} to {want!r}")


def _evaluate_table(table, ctx: _PairContractions, out_axes: str):
    shape = {"": (), "i": (ctx.n,), "ij": (ctx.n, ctx.n)}[out_axes]
    result = np.zeros(shape)
    for sig, weight in table.items():
        value, axes = ctx.signature_value(sig)
        result += float(weight) * _broadcast_axes(value, axes, out_axes)
    return result


def h2_empirical_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The empirically centered second projection of ``h_bar`` on the sample:

        H[k, l] = mean h_bar(z_k, z_l, *) - mean h_bar(z_k, *) [over free args]
                  - mean h_bar(z_l, *) + mean h_bar(*),

    every mean running over unrestricted sample completions.  This is the
    kernel the bootstrap resamples.  O(n**3) time, O(n**2) memory; exactly
    symmetric.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ctx = _PairContractions(a, b)
    t2 = _evaluate_table(_table_two_fixed(), ctx, "ij")
    t1 = _evaluate_table(_table_one_fixed(), ctx, "i")
    t0 = float(_evaluate_table(_table_all_free(), ctx, ""))
    h = t2 - t1[:, None] - t1[None, :] + t0
    return 0.5 * (h + h.T)


# ---------------------------------------------------------------------------
# naive tensor forms (test oracles) and the projection machinery built on them


def _check_naive_size(n: int):
    if n > NAIVE_MAX_N:
        raise ValueError(
            f"naive O(n**6) evaluation is limited to n <= {NAIVE_MAX_N}, got n = {n}"
        )


def _f_tensor(d: np.ndarray) -> np.ndarray:
    """F[p, q, r, s] = f_dist(d, p, q, r, s) for all index tuples."""
    return (
        d[:, :, None, None]
        - d[:, None, :, None]
        - d[None, :, None, :]
        + d[None, None, :, :]
    )


def _h_tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """H[z1..z6] = h(z1..z6), literally."""
    _check_naive_size(a.shape[0])
    fa = _f_tensor(a)
    fb = _f_tensor(b)
    return fa[:, :, :, :, None, None] * fb[:, :, None, None, :, :]


def _hbar_tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Symmetrized kernel on all 6-tuples: mean of H over axis permutations."""
    h = _h_tensor(a, b)
    acc = np.zeros_like(h)
    for perm in itertools.permutations(range(6)):
        acc += h.transpose(perm)
    acc /= 720.0
    return acc


def _completion_tensors(a, b, weights=None):
    """T[c] for c = 0..6, where T[c][i1..ic] averages ``h_bar`` over the
    remaining 6 - c arguments drawn independently from the (weighted)
    empirical measure.  T[0] is the plug-in grand value gamma."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    if weights is None:
        w = np.full(n, 1.0 / n)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,):
            raise ValueError(f"weights shape {w.shape} does not match n = {n}")
    tensors = [None] * 7
    tensors[6] = _hbar_tensor(a, b)
    for c in range(5, -1, -1):
        tensors[c] = np.einsum("...k,k->...", tensors[c + 1], w, optimize=False)
    return tensors


def h_c_empirical(a, b, fixed, weights=None) -> float:
    """Average of ``h_bar`` with the first ``len(fixed)`` arguments pinned to
    sample points and the rest integrated out against the (weighted)
    empirical measure.  Naive tier: n <= 8."""
    fixed = tuple(fixed)
    if not 1 <= len(fixed) <= 6:
        raise ValueError(f"need between 1 and 6 fixed indices, got {len(fixed)}")
    tensors = _completion_tensors(a, b, weights)
    return float(tensors[len(fixed)][fixed])


def _projection_tensors(a, b, weights=None):
    """gamma and the canonical Hoeffding projections h^(1)..h^(6) of
    ``h_bar`` under the plug-in measure, tabulated on sample tuples."""
    tensors = _completion_tensors(a, b, weights)
    gamma = float(tensors[0])
    proj = [None] * 7
    for k in range(1, 7):
        cur = tensors[k] - gamma
        for j in range(1, k):
            pj = proj[j]
            for subset in itertools.combinations(range(k), j):
                idx = [None] * k
                for ax in subset:
                    idx[ax] = slice(None)
                cur = cur - pj[tuple(idx)]
        proj[k] = cur
    return gamma, proj


def h_k_canonical(a, b, fixed, k: int | None = None, weights=None) -> float:
    """Canonical projection ``h^(k)`` of ``h_bar`` at the given sample tuple.

    The projections satisfy the inclusion-exclusion recursion
    ``h_c = gamma + sum_{j<=c} sum_{|S|=j} h^(j)(args_S)`` with the plug-in
    measure in place of the population law.  ``k`` defaults to
    ``len(fixed)``.  Naive tier: n <= 8.
    """
    fixed = tuple(fixed)
    if k is None:
        k = len(fixed)
    if k != len(fixed):
        raise ValueError(f"k = {k} does not match the {len(fixed)} fixed indices")
    if not 1 <= k <= 6:
        raise ValueError(f"k must be between 1 and 6, got {k}")
    _, proj = _projection_tensors(a, b, weights)
    return float(proj[k][fixed])


def h_k_tensor(a, b, k: int, weights=None) -> np.ndarray:
    """Full table of ``h^(k)`` on sample tuples, shape ``(n,) * k``."""
    if not 1 <= k <= 6:
        raise ValueError(f"k must be between 1 and 6, got {k}")
    _, proj = _projection_tensors(a, b, weights)
    return proj[k]


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def h_mc(a, b, indices, m: int = 6, kernel=None) -> float:
    """Multiplicity-weighted restriction of a symmetric degree-``m`` kernel
    to ``c = len(indices)`` distinct arguments:

        sum over compositions v1 + .. + vc = m, v >= 1 of
        m! / (v1! .. vc!) * kernel(i1 repeated v1 times, ..., ic repeated vc).

    With the default kernel (``h_bar``, so ``m = 6``) these are the pieces
    that decompose a V-statistic into U-statistics of lower order.  ``kernel``
    may be any callable on index tuples, for which ``m`` may be any size
    >= ``c``.
    """
    indices = tuple(indices)
    c = len(indices)
    if c < 1:
        raise ValueError("need at least one index")
    if m < c:
        raise ValueError(f"kernel order m = {m} smaller than the {c} indices")
    if kernel is None:
        if m != 6:
            raise ValueError("the default kernel has order 6")
        kernel = lambda t: h_bar(a, b, t)  # noqa: E731
    total = 0.0
    for comp in _compositions(m, c):
        coef = factorial(m)
        args = []
        for ix, v in zip(indices, comp):
            coef //= factorial(v)
            args.extend([ix] * v)
        total += coef * kernel(tuple(args))
    return total


def h2_empirical_matrix_naive(a, b) -> np.ndarray:
    """O(n**6) reference for :func:`h2_empirical_matrix` (n <= 8)."""
    tensors = _completion_tensors(a, b)
    gamma = float(tensors[0])
    t1 = tensors[1]
    h = tensors[2] - t1[:, None] - t1[None, :] + gamma
    return 0.5 * (h + h.T)
