"""Command-line interface.

Subcommands::

    dcovtest test        run the independence test, TestReport JSON on stdout
    dcovtest dcov        compute the statistics only (no calibration)
    dcovtest diagnose    negative-type check per marginal
    dcovtest nulldist    emit Monte Carlo null draws as CSV
    dcovtest crosscheck  characteristic-function vs V-statistic (1-D data)

Marginals are given as CSV files: coordinate files carry a header row and one
column per dimension (``--metric-x euclidean|manhattan``), precomputed
distance matrices are headerless and square (``--metric-x precomputed``).
Exit codes: 0 done, 2 input error, 3 configuration error.  Stdout carries
only the documented JSON/CSV payload; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys

import numpy as np

from .centering import grand_mean
from .crosscheck import QuadratureConfig, dcov_charfn_1d
from .distances import (
    InvalidDistanceMatrix,
    InvalidPointSet,
    negative_type_check,
    pairwise_distances,
    validate_distance_matrix,
)
from .estimators import PairedSample, SampleTooSmall, u_statistic, v_statistic
from .hypotest import InvalidConfig, TestConfig, run_test
from .nulldist import bootstrap_null, sample_weighted_chisq, spectral_eigenvalues

__all__ = ["main"]

_POINT_METRICS = ("euclidean", "manhattan")


class InputDataError(Exception):
    """A data file could not be read or parsed as documented."""


def _read_rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise InputDataError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise InputDataError(f"{path} is not UTF-8 text: {exc}") from None
    if not rows:
        raise InputDataError(f"{path} is empty")
    return rows


def _parse_float(path: str, row: int, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputDataError(f"{path}, row {row}: {text!r} is not a number") from None


def _read_points(path: str, columns: list[str] | None) -> np.ndarray:
    """Points CSV: header row naming the columns, one observation per row."""
    rows = _read_rows(path)
    header = [name.strip() for name in rows[0]]
    if columns:
        missing = [c for c in columns if c not in header]
        if missing:
            raise InputDataError(f"{path} has no column(s) {missing}; header is {header}")
        picks = [header.index(c) for c in columns]
    else:
        picks = list(range(len(header)))
    if not picks:
        raise InputDataError(f"{path}: no columns selected")
    data = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputDataError(
                f"{path}, row {r}: expected {len(header)} fields, got {len(row)}"
            )
        data.append([_parse_float(path, r, row[i]) for i in picks])
    if not data:
        raise InputDataError(f"{path} has a header but no data rows")
    return np.asarray(data, dtype=float)


def _read_matrix(path: str) -> np.ndarray:
    """Matrix CSV: headerless, square, numeric."""
    rows = _read_rows(path)
    n = len(rows)
    data = []
    for r, row in enumerate(rows, start=1):
        if len(row) != n:
            raise InputDataError(
                f"{path} is not square: {n} rows but row {r} has {len(row)} fields"
            )
        data.append([_parse_float(path, r, v) for v in row])
    return np.asarray(data, dtype=float)


def _load_marginal(path: str, metric: str, columns: list[str] | None, strict: bool) -> np.ndarray:
    if metric == "precomputed":
        raw = _read_matrix(path)
        return validate_distance_matrix(raw, level="strict" if strict else "basic")
    pts = _read_points(path, columns)
    return pairwise_distances(pts, metric)


def _split_columns(text: str | None) -> list[str] | None:
    if text is None:
        return None
    cols = [c.strip() for c in text.split(",") if c.strip()]
    if not cols:
        raise InputDataError("empty column selection")
    return cols


def _load_sample(args) -> PairedSample:
    dx = _load_marginal(args.x, args.metric_x, _split_columns(args.x_columns), args.strict_metric)
    dy = _load_marginal(args.y, args.metric_y, _split_columns(args.y_columns), args.strict_metric)
    if dx.shape[0] != dy.shape[0]:
        raise InputDataError(
            f"row count mismatch: x has {dx.shape[0]} observations, y has {dy.shape[0]}"
        )
    return PairedSample(dx=dx, dy=dy)


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload))


def _cmd_test(args) -> int:
    sample = _load_sample(args)
    config = TestConfig(
        seed=args.seed,
        estimator=args.estimator,
        threshold_method=args.threshold,
        alpha=args.alpha,
        m=args.reps,
    )
    report = run_test(sample, config)
    _emit_json(report.to_dict())
    return 0


def _bound_check(v: float, dvar_x: float, dvar_y: float, mean_x: float, mean_y: float) -> dict:
    """The chain |V| <= sqrt(Vx * Vy) <= mean_x * mean_y, with rounding slack."""
    sqrt_prod = math.sqrt(max(dvar_x, 0.0) * max(dvar_y, 0.0))
    mean_prod = mean_x * mean_y
    slack = 1e-10
    return {
        "cov_le_sqrt_var_product": abs(v) <= sqrt_prod + slack * (1.0 + sqrt_prod),
        "sqrt_var_product_le_mean_product": sqrt_prod <= mean_prod + slack * (1.0 + mean_prod),
    }


def _cmd_dcov(args) -> int:
    sample = _load_sample(args)
    v = v_statistic(sample)
    payload: dict = {"v": v}
    if sample.n >= 7:
        payload["u"] = u_statistic(sample)
    dvar_x = v_statistic(PairedSample(sample.dx, sample.dx))
    dvar_y = v_statistic(PairedSample(sample.dy, sample.dy))
    payload["dvar_x"] = dvar_x
    payload["dvar_y"] = dvar_y
    payload["bound_check"] = _bound_check(
        v, dvar_x, dvar_y, grand_mean(sample.dx), grand_mean(sample.dy)
    )
    _emit_json(payload)
    return 0


def _cmd_diagnose(args) -> int:
    payload = {}
    dx = _load_marginal(args.x, args.metric_x, _split_columns(args.x_columns), args.strict_metric)
    payload["x"] = dataclasses.asdict(negative_type_check(dx, base=args.base, tol=args.tol))
    if args.y is not None:
        dy = _load_marginal(
            args.y, args.metric_y, _split_columns(args.y_columns), args.strict_metric
        )
        payload["y"] = dataclasses.asdict(negative_type_check(dy, base=args.base, tol=args.tol))
    _emit_json(payload)
    return 0


def _cmd_nulldist(args) -> int:
    sample = _load_sample(args)
    if args.method == "bootstrap":
        null = bootstrap_null(sample, m=args.reps or 1000, seed=args.seed)
    else:
        model = spectral_eigenvalues(sample, law=args.estimator)
        null = sample_weighted_chisq(model, m=args.reps or 4000, seed=args.seed)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["draw"])
    for value in null.draws:
        writer.writerow([repr(float(value))])
    return 0


def _cmd_crosscheck(args) -> int:
    x = _read_points(args.x, _split_columns(args.x_columns))
    y = _read_points(args.y, _split_columns(args.y_columns))
    if x.shape[1] != 1 or y.shape[1] != 1:
        raise InputDataError(
            "crosscheck works on 1-D marginals; select one column per file"
        )
    if x.shape[0] != y.shape[0]:
        raise InputDataError(
            f"row count mismatch: x has {x.shape[0]} observations, y has {y.shape[0]}"
        )
    q = QuadratureConfig(epsilon=args.epsilon, radius=args.radius, grid=args.grid)
    charfn = dcov_charfn_1d(x[:, 0], y[:, 0], q)
    v = v_statistic(PairedSample.from_points(x, y))
    payload = {
        "charfn": charfn,
        "v_statistic": v,
        "relative_error": abs(charfn - v) / (1.0 + v),
    }
    _emit_json(payload)
    return 0


def _add_marginal_args(parser: argparse.ArgumentParser, y_required: bool = True) -> None:
    parser.add_argument("--x", required=True, help="CSV file for the X marginal")
    parser.add_argument("--y", required=y_required, help="CSV file for the Y marginal")
    parser.add_argument(
        "--metric-x",
        choices=_POINT_METRICS + ("precomputed",),
        default="euclidean",
        help="metric for X points, or 'precomputed' if --x is a distance matrix",
    )
    parser.add_argument(
        "--metric-y",
        choices=_POINT_METRICS + ("precomputed",),
        default="euclidean",
        help="metric for Y points, or 'precomputed' if --y is a distance matrix",
    )
    parser.add_argument(
        "--x-columns", default=None, help="comma-separated column names to use from --x"
    )
    parser.add_argument(
        "--y-columns", default=None, help="comma-separated column names to use from --y"
    )
    parser.add_argument(
        "--strict-metric",
        action="store_true",
        help="also verify the triangle inequality on precomputed matrices",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcovtest",
        description="Distance-covariance independence testing in metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run the independence test")
    _add_marginal_args(p_test)
    p_test.add_argument("--estimator", choices=("u", "v"), default="u")
    p_test.add_argument("--threshold", choices=("bootstrap", "spectral"), default="bootstrap")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--reps", type=int, default=None, help="Monte Carlo size")
    p_test.add_argument("--seed", type=int, required=True)
    p_test.set_defaults(func=_cmd_test)

    p_dcov = sub.add_parser("dcov", help="compute the statistics without a test")
    _add_marginal_args(p_dcov)
    p_dcov.set_defaults(func=_cmd_dcov)

    p_diag = sub.add_parser("diagnose", help="negative-type check per marginal")
    _add_marginal_args(p_diag, y_required=False)
    p_diag.add_argument("--base", type=int, default=0, help="base point index")
    p_diag.add_argument("--tol", type=float, default=None, help="PSD tolerance override")
    p_diag.set_defaults(func=_cmd_diagnose)

    p_null = sub.add_parser("nulldist", help="emit null-distribution draws as CSV")
    _add_marginal_args(p_null)
    p_null.add_argument("--method", choices=("bootstrap", "spectral"), default="bootstrap")
    p_null.add_argument(
        "--estimator", choices=("u", "v"), default="u", help="law targeted by spectral draws"
    )
    p_null.add_argument("--reps", type=int, default=None, help="number of draws")
    p_null.add_argument("--seed", type=int, required=True)
    p_null.set_defaults(func=_cmd_nulldist)

    p_cross = sub.add_parser("crosscheck", help="characteristic-function crosscheck (1-D)")
    p_cross.add_argument("--x", required=True, help="CSV points file for X")
    p_cross.add_argument("--y", required=True, help="CSV points file for Y")
    p_cross.add_argument("--x-columns", default=None)
    p_cross.add_argument("--y-columns", default=None)
    p_cross.add_argument("--epsilon", type=float, default=1e-3)
    p_cross.add_argument("--radius", type=float, default=200.0)
    p_cross.add_argument("--grid", type=int, default=2000)
    p_cross.set_defaults(func=_cmd_crosscheck)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputDataError, InvalidPointSet, InvalidDistanceMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidConfig, SampleTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
