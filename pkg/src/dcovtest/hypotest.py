"""The independence test: statistic, calibrated threshold, decision.

``run_test`` wires an estimator (U or V) to a null-distribution method
(bootstrap or spectral), compares the scaled statistic ``n * stat`` against
the ``1 - alpha`` null quantile, and reports a Monte Carlo p-value.  The
bootstrap calibrates the U-statistic only; the spectral route exists for
both, with the V-law shifted by the product of mean marginal distances.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .distances import negative_type_check
from .estimators import PairedSample, u_statistic, v_statistic
from .nulldist import bootstrap_null, quantile, sample_weighted_chisq, spectral_eigenvalues

__all__ = ["InvalidConfig", "TestConfig", "TestReport", "run_test"]


class InvalidConfig(ValueError):
    """The requested estimator/threshold combination or parameters are invalid."""


@dataclasses.dataclass(frozen=True)
class TestConfig:
    """Choices for one run of the independence test.

    ``m`` is the Monte Carlo size; ``None`` picks 1000 for the bootstrap and
    4000 for the spectral route.  ``seed`` must be supplied: every published
    number should be reproducible.
    """

    __test__ = False  # not a pytest case, despite the name

    seed: int
    estimator: str = "u"
    threshold_method: str = "bootstrap"
    alpha: float = 0.05
    m: int | None = None


@dataclasses.dataclass(frozen=True)
class TestReport:
    """Everything needed to audit one test decision."""

    __test__ = False  # not a pytest case, despite the name

    n: int
    estimator: str
    threshold_method: str
    alpha: float
    m: int
    seed: int
    statistic_raw: float
    statistic_scaled: float
    threshold: float
    p_value: float
    reject: bool
    negative_type_warning: str | None

    def to_dict(self) -> dict:
        """Plain dict with a fixed key order, ready for ``json.dumps``."""
        return {
            "n": self.n,
            "estimator": self.estimator,
            "threshold_method": self.threshold_method,
            "alpha": self.alpha,
            "m": self.m,
            "seed": self.seed,
            "statistic_raw": self.statistic_raw,
            "statistic_scaled": self.statistic_scaled,
            "threshold": self.threshold,
            "p_value": self.p_value,
            "reject": self.reject,
            "negative_type_warning": self.negative_type_warning,
        }


def _negative_type_warning(sample: PairedSample) -> str | None:
    problems = []
    for label, mat in (("X", sample.dx), ("Y", sample.dy)):
        report = negative_type_check(mat)
        if not report.is_negative_type_on_sample:
            problems.append(
                f"{label} marginal fails the negative-type check "
                f"(min eigenvalue {report.min_eigenvalue:.3g})"
            )
    if not problems:
        return None
    return (
        "; ".join(problems)
        + "; a zero distance covariance need not certify independence"
    )


def run_test(sample: PairedSample, config: TestConfig) -> TestReport:
    """Run the independence test and return a full report.

    Decision rule: reject when the scaled statistic strictly exceeds the
    ``1 - alpha`` quantile of the Monte Carlo null; ties do not reject.  The
    p-value is ``(1 + #{draws >= statistic}) / (m + 1)``, which is never
    smaller than ``1 / (m + 1)``.

    Raises:
        InvalidConfig: for unknown estimator/threshold names, alpha outside
            (0, 1), non-positive m, or the bootstrap paired with the
            V-statistic (the bootstrap kernel matrix is centered for the
            U-statistic's null law).
        SampleTooSmall: from the U-statistic when n <= 6.
    """
    if config.estimator not in ("u", "v"):
        raise InvalidConfig(f"estimator must be 'u' or 'v', got {config.estimator!r}")
    if config.threshold_method not in ("bootstrap", "spectral"):
        raise InvalidConfig(
            f"threshold method must be 'bootstrap' or 'spectral', got {config.threshold_method!r}"
        )
    if config.estimator == "v" and config.threshold_method == "bootstrap":
        raise InvalidConfig(
            "the bootstrap calibrates the U-statistic; use estimator='u' "
            "or threshold_method='spectral'"
        )
    if not 0.0 < config.alpha < 1.0:
        raise InvalidConfig(f"alpha must be strictly between 0 and 1, got {config.alpha}")
    m = config.m
    if m is None:
        m = 1000 if config.threshold_method == "bootstrap" else 4000
    if m < 1:
        raise InvalidConfig(f"m must be positive, got {m}")
    if not isinstance(config.seed, (int, np.integer)):
        raise InvalidConfig(f"seed must be an integer, got {config.seed!r}")

    n = sample.n
    stat = u_statistic(sample) if config.estimator == "u" else v_statistic(sample)
    scaled = n * stat

    if config.threshold_method == "bootstrap":
        null = bootstrap_null(sample, m=m, seed=config.seed)
    else:
        model = spectral_eigenvalues(sample, law=config.estimator)
        null = sample_weighted_chisq(model, m=m, seed=config.seed)

    threshold = quantile(null, 1.0 - config.alpha)
    count_ge = int(np.count_nonzero(null.draws >= scaled))
    p_value = (1.0 + count_ge) / (m + 1.0)
    reject = bool(scaled > threshold)

    return TestReport(
        n=n,
        estimator=config.estimator,
        threshold_method=null.method,
        alpha=float(config.alpha),
        m=m,
        seed=int(config.seed),
        statistic_raw=float(stat),
        statistic_scaled=float(scaled),
        threshold=float(threshold),
        p_value=float(p_value),
        reject=reject,
        negative_type_warning=_negative_type_warning(sample),
    )
