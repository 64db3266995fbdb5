"""Distance-covariance independence testing in separable metric spaces.

The pieces, bottom to top:

* :mod:`dcovtest.distances` — distance matrices, validation, the
  negative-type diagnostic;
* :mod:`dcovtest.centering` — double centering and exact distance covariance
  of finitely supported measures;
* :mod:`dcovtest.kernels` — the degree-six product kernel, its symmetrization
  and projections, and the O(n^3) empirically centered kernel matrix;
* :mod:`dcovtest.estimators` — U- and V-statistics (with naive references);
* :mod:`dcovtest.nulldist` — bootstrap and spectral null distributions;
* :mod:`dcovtest.hypotest` — the calibrated test returning a
  :class:`~dcovtest.hypotest.TestReport`;
* :mod:`dcovtest.crosscheck` — characteristic-function crosscheck for 1-D
  Euclidean data;
* :mod:`dcovtest.cli` — the ``dcovtest`` command.

All randomness is seeded explicitly and all reductions avoid threaded BLAS,
so every number this package produces is reproducible bit for bit.
"""

from .centering import (
    CenteredMatrix,
    DiscreteJointMeasure,
    a_mu_empirical,
    dcov_discrete,
    double_center,
    double_center_weighted,
    dvar_discrete,
    grand_mean,
)
from .crosscheck import QuadratureConfig, c_constant, dcov_charfn_1d
from .distances import (
    InvalidDistanceMatrix,
    InvalidPointSet,
    NegativeTypeReport,
    negative_type_check,
    pairwise_distances,
    validate_distance_matrix,
)
from .estimators import (
    PairedSample,
    SampleTooSmall,
    u_statistic,
    u_statistic_naive,
    v_statistic,
    v_statistic_naive,
)
from .hypotest import InvalidConfig, TestConfig, TestReport, run_test
from .kernels import (
    f_dist,
    h2_empirical_matrix,
    h2_empirical_matrix_naive,
    h_bar,
    h_c_empirical,
    h_k_canonical,
    h_k_tensor,
    h_kernel,
    h_mc,
)
from .nulldist import (
    NullDistribution,
    SpectralModel,
    bootstrap_null,
    quantile,
    sample_weighted_chisq,
    spectral_eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "CenteredMatrix",
    "DiscreteJointMeasure",
    "InvalidConfig",
    "InvalidDistanceMatrix",
    "InvalidPointSet",
    "NegativeTypeReport",
    "NullDistribution",
    "PairedSample",
    "QuadratureConfig",
    "SampleTooSmall",
    "SpectralModel",
    "TestConfig",
    "TestReport",
    "a_mu_empirical",
    "bootstrap_null",
    "c_constant",
    "dcov_charfn_1d",
    "dcov_discrete",
    "double_center",
    "double_center_weighted",
    "dvar_discrete",
    "f_dist",
    "grand_mean",
    "h2_empirical_matrix",
    "h2_empirical_matrix_naive",
    "h_bar",
    "h_c_empirical",
    "h_k_canonical",
    "h_k_tensor",
    "h_kernel",
    "h_mc",
    "negative_type_check",
    "pairwise_distances",
    "quantile",
    "run_test",
    "sample_weighted_chisq",
    "spectral_eigenvalues",
    "u_statistic",
    "u_statistic_naive",
    "v_statistic",
    "v_statistic_naive",
    "validate_distance_matrix",
    "__version__",
]
