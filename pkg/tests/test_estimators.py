import numpy as np
import pytest

from dcovtest import (
    DiscreteJointMeasure,
    PairedSample,
    SampleTooSmall,
    dcov_discrete,
    double_center,
    pairwise_distances,
    u_statistic,
    u_statistic_naive,
    v_statistic,
    v_statistic_naive,
)

TWO = np.array([[0.0, 1], [1.0, 0]])


def random_sample(rng, n):
    dims = (int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    metrics = ("euclidean", "manhattan")
    return PairedSample.from_points(
        rng.normal(size=(n, dims[0])),
        rng.normal(size=(n, dims[1])),
        metrics[int(rng.integers(2))],
        metrics[int(rng.integers(2))],
    )


def test_v_two_point_example():
    assert v_statistic(PairedSample(TWO, TWO)) == 0.25


def test_v_single_point_is_zero():
    assert v_statistic(PairedSample(np.zeros((1, 1)), np.zeros((1, 1)))) == 0.0


def test_v_constant_marginal_is_zero():
    rng = np.random.default_rng(0)
    dx = pairwise_distances(rng.normal(size=(8, 2)))
    assert v_statistic(PairedSample(dx, np.zeros((8, 8)))) == 0.0


def test_v_matches_naive_enumeration():
    rng = np.random.default_rng(1)
    for n in (1, 2, 3, 4, 5, 6):
        s = random_sample(rng, n)
        fast = v_statistic(s)
        slow = v_statistic_naive(s)
        assert abs(fast - slow) <= 1e-10 * (1.0 + abs(fast))


def test_v_equals_centered_hadamard_mean():
    rng = np.random.default_rng(2)
    for n in (2, 7, 23):
        s = random_sample(rng, n)
        ax = double_center(s.dx).centered
        by = double_center(s.dy).centered
        hadamard = float(np.sum(ax * by)) / (n * n)
        scale = 1.0 + abs(hadamard)
        assert abs(v_statistic(s) - hadamard) <= 1e-10 * scale


def test_v_is_dcov_of_empirical_measure():
    rng = np.random.default_rng(3)
    s = random_sample(rng, 9)
    theta = DiscreteJointMeasure(s.dx, s.dy, np.full(9, 1 / 9))
    assert v_statistic(s) == pytest.approx(dcov_discrete(theta), rel=1e-12, abs=1e-15)


def test_v_nonnegative_for_negative_type_metrics():
    rng = np.random.default_rng(4)
    for trial in range(40):
        s = random_sample(rng, int(rng.integers(1, 25)))
        assert v_statistic(s) >= -1e-12


def test_u_matches_naive_enumeration():
    rng = np.random.default_rng(5)
    for n in (7, 8):
        for _ in range(3):
            s = random_sample(rng, n)
            fast = u_statistic(s)
            slow = u_statistic_naive(s)
            assert abs(fast - slow) <= 1e-9 * (1.0 + abs(slow))


def test_u_rejects_small_samples():
    rng = np.random.default_rng(6)
    s = random_sample(rng, 6)
    with pytest.raises(SampleTooSmall, match="7"):
        u_statistic(s)
    with pytest.raises(SampleTooSmall, match="7"):
        u_statistic_naive(s)


def test_u_can_be_negative():
    # unbiasedness around zero forces negative values under independence
    rng = np.random.default_rng(7)
    values = [u_statistic(random_sample(rng, 12)) for _ in range(40)]
    assert min(values) < 0.0


def test_naive_guards_large_n():
    s = PairedSample(np.zeros((9, 9)), np.zeros((9, 9)))
    with pytest.raises(ValueError, match="n <= 8"):
        v_statistic_naive(s)
    with pytest.raises(ValueError, match="n <= 8"):
        u_statistic_naive(s)


def test_paired_sample_validation():
    with pytest.raises(ValueError, match="square"):
        PairedSample(np.zeros((2, 3)), np.zeros((2, 2)))
    with pytest.raises(ValueError, match="equal shape"):
        PairedSample(np.zeros((2, 2)), np.zeros((3, 3)))


def test_from_points_row_mismatch():
    with pytest.raises(ValueError, match="observations"):
        PairedSample.from_points([(0.0,), (1.0,)], [(0.0,)])


def test_statistics_scale_bilinearly():
    # dcov is homogeneous of degree 1 in each marginal's distances; scaling by
    # powers of two is exact in floating point
    rng = np.random.default_rng(8)
    s = random_sample(rng, 10)
    doubled = PairedSample(2.0 * s.dx, s.dy)
    assert v_statistic(doubled) == 2.0 * v_statistic(s)
    assert u_statistic(doubled) == 2.0 * u_statistic(s)
    both = PairedSample(2.0 * s.dx, 0.5 * s.dy)
    assert v_statistic(both) == v_statistic(s)


def test_u_large_n_runs_fast():
    rng = np.random.default_rng(9)
    s = random_sample(rng, 2000)
    value = u_statistic(s)
    assert np.isfinite(value)
