import itertools

import numpy as np
import pytest

from dcovtest import (
    DiscreteJointMeasure,
    dcov_discrete,
    double_center_weighted,
    f_dist,
    h2_empirical_matrix,
    h2_empirical_matrix_naive,
    h_bar,
    h_c_empirical,
    h_k_canonical,
    h_k_tensor,
    h_kernel,
    h_mc,
    pairwise_distances,
)
from dcovtest import kernels

TWO = np.array([[0.0, 1], [1.0, 0]])


def random_pair(rng, n):
    dx = pairwise_distances(rng.normal(size=(n, int(rng.integers(1, 4)))))
    dy = pairwise_distances(rng.normal(size=(n, int(rng.integers(1, 3)))), "manhattan")
    return dx, dy


def test_f_dist_arithmetic():
    d = pairwise_distances([(0.0,), (1.0,), (3.0,)])
    # d(0,1) - d(0,2) - d(1,2) + d(2,2) = 1 - 3 - 2 + 0
    assert f_dist(d, 0, 1, 2, 2) == -4.0
    assert f_dist(d, 0, 0, 0, 0) == 0.0


def test_f_collision_identities():
    rng = np.random.default_rng(0)
    d = pairwise_distances(rng.normal(size=(5, 2)))
    for i, j in itertools.product(range(5), repeat=2):
        # crossed collision cancels term by term
        assert f_dist(d, i, j, j, i) == 0.0
        # doubled-up slots collapse to a single distance
        assert f_dist(d, i, i, j, j) == -2.0 * d[i, j]
        assert f_dist(d, i, j, i, j) == 2.0 * d[i, j]


# |f(z1,z2,z3,z4)| / 2 is bounded by each of these fifteen expressions
F_BOUNDS = [
    lambda d, z: d[z[0], z[3]],
    lambda d, z: d[z[1], z[2]],
    lambda d, z: max(d[z[0], z[1]], d[z[0], z[2]]),
    lambda d, z: max(d[z[0], z[1]], d[z[0], z[3]]),
    lambda d, z: max(d[z[0], z[1]], d[z[1], z[2]]),
    lambda d, z: max(d[z[0], z[1]], d[z[1], z[3]]),
    lambda d, z: max(d[z[0], z[3]], d[z[0], z[2]]),
    lambda d, z: max(d[z[0], z[3]], d[z[1], z[2]]),
    lambda d, z: max(d[z[0], z[3]], d[z[1], z[3]]),
    lambda d, z: max(d[z[1], z[2]], d[z[0], z[2]]),
    lambda d, z: max(d[z[1], z[2]], d[z[1], z[3]]),
    lambda d, z: max(d[z[2], z[3]], d[z[0], z[2]]),
    lambda d, z: max(d[z[2], z[3]], d[z[0], z[3]]),
    lambda d, z: max(d[z[2], z[3]], d[z[1], z[2]]),
    lambda d, z: max(d[z[2], z[3]], d[z[1], z[3]]),
]


def test_f_pairwise_maximum_bounds():
    """Triangle-inequality consequences: |f|/2 never exceeds any of the
    fifteen pairwise-maximum distance expressions."""
    rng = np.random.default_rng(1)
    for trial in range(60):
        n = int(rng.integers(4, 8))
        metric = "euclidean" if trial % 2 else "manhattan"
        d = pairwise_distances(rng.normal(size=(n, int(rng.integers(1, 4)))), metric)
        scale = 1.0 + float(d.max())
        for _ in range(10):
            z = tuple(rng.integers(0, n, size=4))
            half_f = abs(f_dist(d, *z)) / 2.0
            for bound in F_BOUNDS:
                assert half_f <= bound(d, z) + 1e-12 * scale


def test_h_two_point_example():
    assert h_kernel(TWO, TWO, (0, 1, 0, 1, 0, 1)) == 4.0


def test_h_wrong_arity():
    with pytest.raises(ValueError):
        h_kernel(TWO, TWO, (0, 1))
    with pytest.raises(ValueError):
        h_bar(TWO, TWO, (0, 1, 0, 1))


def test_h_is_not_symmetric():
    # same multiset of arguments, different order, different value
    d = pairwise_distances([(0.0,), (1.0,), (3.0,)])
    assert h_kernel(d, d, (0, 0, 0, 0, 1, 1)) == 0.0
    assert h_kernel(d, d, (1, 1, 0, 0, 0, 0)) == 4.0


def test_h_bar_is_symmetric():
    rng = np.random.default_rng(2)
    dx, dy = random_pair(rng, 5)
    t = (0, 1, 1, 3, 4, 2)
    base = h_bar(dx, dy, t)
    for _ in range(6):
        perm = tuple(rng.permutation(6))
        shuffled = tuple(t[p] for p in perm)
        assert h_bar(dx, dy, shuffled) == pytest.approx(base, rel=1e-12, abs=1e-12)


def test_h_bar_matches_tensor():
    rng = np.random.default_rng(3)
    dx, dy = random_pair(rng, 3)
    tensor = kernels._hbar_tensor(dx, dy)
    for t in itertools.product(range(3), repeat=6):
        assert tensor[t] == pytest.approx(h_bar(dx, dy, t), rel=1e-12, abs=1e-12)


def test_h_c_full_fixing_recovers_h_bar():
    rng = np.random.default_rng(4)
    dx, dy = random_pair(rng, 4)
    t = (0, 3, 1, 1, 2, 0)
    assert h_c_empirical(dx, dy, t) == pytest.approx(h_bar(dx, dy, t), rel=1e-12)


def test_h_c_one_free_argument_is_the_mean():
    rng = np.random.default_rng(5)
    dx, dy = random_pair(rng, 3)
    fixed = (2, 0, 1, 1, 2)
    manual = np.mean([h_bar(dx, dy, fixed + (k,)) for k in range(3)])
    assert h_c_empirical(dx, dy, fixed) == pytest.approx(manual, rel=1e-12)


def test_h_c_weighted_mean():
    rng = np.random.default_rng(6)
    dx, dy = random_pair(rng, 3)
    w = np.array([0.2, 0.3, 0.5])
    fixed = (1, 1, 0, 2, 2)
    manual = sum(w[k] * h_bar(dx, dy, fixed + (k,)) for k in range(3))
    assert h_c_empirical(dx, dy, fixed, weights=w) == pytest.approx(manual, rel=1e-12)


def test_h_c_validates_arity():
    with pytest.raises(ValueError):
        h_c_empirical(TWO, TWO, ())
    with pytest.raises(ValueError):
        h_c_empirical(TWO, TWO, (0,) * 7)


def test_h_k_level_one_is_centered_completion():
    rng = np.random.default_rng(7)
    dx, dy = random_pair(rng, 4)
    tensors = kernels._completion_tensors(dx, dy)
    gamma = float(tensors[0])
    for i in range(4):
        expect = float(tensors[1][i]) - gamma
        assert h_k_canonical(dx, dy, (i,)) == pytest.approx(expect, rel=1e-12, abs=1e-15)


def test_h_k_level_two_four_term_identity():
    """h^(2)(z1,z2) = h_2(z1,z2) - h_1(z1) - h_1(z2) + gamma."""
    rng = np.random.default_rng(8)
    dx, dy = random_pair(rng, 4)
    tensors = kernels._completion_tensors(dx, dy)
    gamma = float(tensors[0])
    h2 = h_k_tensor(dx, dy, 2)
    expect = tensors[2] - tensors[1][:, None] - tensors[1][None, :] + gamma
    assert np.allclose(h2, expect, atol=1e-13)


def test_h_k_recursion_reconstructs_completions():
    """gamma plus all lower projections over argument subsets must rebuild
    h_c exactly -- the defining property of the canonical decomposition."""
    rng = np.random.default_rng(9)
    dx, dy = random_pair(rng, 3)
    w = rng.dirichlet(np.ones(3))
    tensors = kernels._completion_tensors(dx, dy, w)
    gamma = float(tensors[0])
    proj = [None] + [h_k_tensor(dx, dy, k, weights=w) for k in range(1, 5)]
    for c in (1, 2, 3, 4):
        recon = np.full((3,) * c, gamma)
        for j in range(1, c + 1):
            for subset in itertools.combinations(range(c), j):
                idx = [None] * c
                for ax in subset:
                    idx[ax] = slice(None)
                recon = recon + proj[j][tuple(idx)]
        assert np.allclose(recon, tensors[c], atol=1e-12)


def test_h_k_validates_arguments():
    with pytest.raises(ValueError):
        h_k_canonical(TWO, TWO, (0, 1), k=3)
    with pytest.raises(ValueError):
        h_k_tensor(TWO, TWO, 0)
    with pytest.raises(ValueError):
        h_k_tensor(TWO, TWO, 7)


def test_degeneracy_on_product_support():
    """Under a product-form discrete law with non-degenerate marginals the
    first projection vanishes and the second is (1/15) dmu * dnu."""
    xs, ys = [0.0, 1.0], [0.0, 3.0]
    px, py = [0.4, 0.6], [0.7, 0.3]
    support = [(x, y) for x in xs for y in ys]
    w = np.array([a * b for a in px for b in py])
    dx = pairwise_distances([(s[0],) for s in support])
    dy = pairwise_distances([(s[1],) for s in support])

    h1 = h_k_tensor(dx, dy, 1, weights=w)
    assert np.abs(h1).max() <= 1e-14

    h2 = h_k_tensor(dx, dy, 2, weights=w)
    dmu = double_center_weighted(dx, w).centered
    dnu = double_center_weighted(dy, w).centered
    assert np.allclose(h2, dmu * dnu / 15.0, atol=1e-14)
    assert np.abs(h2).max() > 1e-3  # non-degenerate marginals: not identically 0

    # and gamma recovers dcov of the measure (zero here, it is a product law)
    gamma = float(kernels._completion_tensors(dx, dy, w)[0])
    assert gamma == pytest.approx(dcov_discrete(DiscreteJointMeasure(dx, dy, w)), abs=1e-15)


def test_h_mc_counting_kernels():
    # kernel that returns 1: h_mc sums the multinomial coefficients, i.e. the
    # number of surjections of 6 slots onto 2 labeled cells = 2^6 - 2
    ones = lambda t: 1.0  # noqa: E731
    assert h_mc(None, None, (0, 1), kernel=ones) == 62.0
    # kernel counting its arguments, order 3 on 2 indices: compositions (2,1)
    # and (1,2), coefficient 3 each, value 3 each
    count = lambda t: float(len(t))  # noqa: E731
    assert h_mc(None, None, (0, 1), m=3, kernel=count) == 18.0


def test_h_mc_decomposes_v_statistic():
    """V_n = sum_c C(n,c) n^-6 U_n^c(h_mc): the multiplicity decomposition of
    the complete 6-fold sum over distinct-support patterns."""
    from math import comb

    rng = np.random.default_rng(10)
    for n in (2, 3):
        dx, dy = random_pair(rng, n)
        v_direct = float(kernels._h_tensor(dx, dy).mean())
        total = 0.0
        for c in range(1, min(n, 6) + 1):
            vals = [
                h_mc(dx, dy, tup)
                for tup in itertools.permutations(range(n), c)
            ]
            total += comb(n, c) / n**6 * float(np.mean(vals))
        assert total == pytest.approx(v_direct, rel=1e-10, abs=1e-15)


def test_h_mc_validates():
    with pytest.raises(ValueError, match="order 6"):
        h_mc(TWO, TWO, (0,), m=4)
    with pytest.raises(ValueError):
        h_mc(TWO, TWO, ())
    with pytest.raises(ValueError, match="smaller"):
        h_mc(None, None, (0, 1, 2), m=2, kernel=lambda t: 0.0)


def test_h2_matrix_matches_naive():
    rng = np.random.default_rng(11)
    for n in (2, 3, 4, 5):
        dx, dy = random_pair(rng, n)
        fast = h2_empirical_matrix(dx, dy)
        slow = h2_empirical_matrix_naive(dx, dy)
        scale = 1.0 + float(np.abs(slow).max())
        assert np.abs(fast - slow).max() <= 1e-12 * scale


def test_h2_matrix_is_bitwise_symmetric():
    rng = np.random.default_rng(12)
    dx, dy = random_pair(rng, 9)
    h = h2_empirical_matrix(dx, dy)
    assert np.array_equal(h, h.T)


def test_h2_matrix_equals_second_projection():
    """The fast kernel matrix must agree with the canonical projection
    machinery evaluated under uniform weights."""
    rng = np.random.default_rng(13)
    dx, dy = random_pair(rng, 6)
    fast = h2_empirical_matrix(dx, dy)
    proj = h_k_tensor(dx, dy, 2)
    assert np.allclose(fast, proj, atol=1e-13)


def test_naive_tier_is_size_guarded():
    big = np.zeros((9, 9))
    with pytest.raises(ValueError, match="n <= 8"):
        h2_empirical_matrix_naive(big, big)
    with pytest.raises(ValueError, match="n <= 8"):
        h_c_empirical(big, big, (0,))


def test_engine_tables_are_small_and_balanced():
    # the 720 x 16 expansion must collapse to a compact signature table whose
    # weights sum to the plain 16-term count (permutations preserve mass)
    t2 = kernels._table_two_fixed()
    assert len(t2) < 40
    assert sum(t2.values()) == 0  # the 16 signs cancel: +4 +4 -4 -4 per f, squared structure
    t0 = kernels._table_all_free()
    assert len(t0) == 3


def test_engine_handles_scaled_inputs_linearly():
    rng = np.random.default_rng(14)
    dx, dy = random_pair(rng, 6)
    h = h2_empirical_matrix(dx, dy)
    assert np.array_equal(h2_empirical_matrix(2.0 * dx, dy), 2.0 * h)
    assert np.array_equal(h2_empirical_matrix(dx, 4.0 * dy), 4.0 * h)
