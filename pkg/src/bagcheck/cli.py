"""Command-line entry point.

    bagcheck regression     [--n-grid A:B:STEP] [--trials INT] ...
    bagcheck mse-gap        [--dist SPEC ...] [--n-grid A:B:STEP] [--N INT] ...
    bagcheck kurtosis-sweep [--p-grid A:B:STEP] [--a REAL] [--N INT] ...
    bagcheck formulas       [--dist SPEC] [--n INT] [--m INT] [--N INT] [--q INT]
    bagcheck oracle         [--data X,Y,...] [--m INT] [--N INT]

Row experiments emit CSV (stdout, or --out PATH); formulas and oracle
print a table unless --out is given.  Exit codes: 0 success, 1 runtime
or numeric error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import experiments
from .distributions import parse_distribution


def int_grid(text: str):
    parts = text.split(":")
    if len(parts) == 1:
        return (int(parts[0]),)
    if len(parts) != 3:
        raise ValueError(f"bad grid {text!r}; expected A:B:STEP")
    lo, hi, step = (int(p) for p in parts)
    if step < 1 or hi < lo:
        raise ValueError(f"bad grid {text!r}; need B >= A and STEP >= 1")
    return tuple(range(lo, hi + 1, step))


def float_grid(text: str):
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise ValueError(f"bad grid {text!r}; expected A:B:STEP")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {text!r}; need B >= A and STEP > 0")
    count = int((hi - lo) / step + 1e-9) + 1
    return tuple(round(lo + k * step, 12) for k in range(count))


def data_list(text: str):
    values = tuple(float(p) for p in text.split(",") if p.strip() != "")
    if not values:
        raise ValueError("empty --data list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bagcheck",
        description="Bagged-estimator experiments, closed-form tables, and enumeration checks.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")

    reg = sub.add_parser(
        "regression", help="test MSE of bagged OLS/tree predictors vs number of bags"
    )
    reg.add_argument("--n-grid", type=int_grid, default=experiments.DEFAULT_N_GRID,
                     help="grid of bag counts N (default 1,2,4,...,64)")
    reg.add_argument("--trials", type=int, default=30, help="bag-set draws per dataset")
    reg.add_argument("--datasets", type=int, default=5, help="independent datasets")
    reg.add_argument("--samples", type=int, default=1000)
    reg.add_argument("--features", type=int, default=2)
    reg.add_argument("--train-frac", type=float, default=0.05)
    reg.add_argument("--noise", type=float, nargs="+", default=[0.5, 5.0])
    reg.add_argument("--m", type=int, default=None, help="bag size (default: train size)")
    reg.add_argument("--seed", type=int, default=0)
    reg.add_argument("--out", default=None)

    gap = sub.add_parser(
        "mse-gap", help="MC vs exact MSE gap between bagged and plain variance"
    )
    gap.add_argument("--dist", type=parse_distribution, action="append", default=None,
                     help="distribution spec; repeatable (default: gaussian, uniform, rademacher)")
    gap.add_argument("--n-grid", type=int_grid, default=(8, 16, 24, 32, 40, 48),
                     help="grid of sample sizes n")
    gap.add_argument("--N", type=int, default=50)
    gap.add_argument("--m", type=int, default=None, help="bag size (default: n)")
    gap.add_argument("--trials", type=int, default=10_000)
    gap.add_argument("--seed", type=int, default=0)
    gap.add_argument("--out", default=None)

    sweep = sub.add_parser(
        "kurtosis-sweep", help="MSE with/without bagging across the kurtosis threshold"
    )
    sweep.add_argument("--p-grid", type=float_grid, default=None,
                       help="grid of mixing weights p in (0,1) (default 0.02:0.98:0.02)")
    sweep.add_argument("--a", type=float, default=0.125)
    sweep.add_argument("--n", type=int, default=10)
    sweep.add_argument("--N", type=int, default=20)
    sweep.add_argument("--m", type=int, default=None, help="bag size (default: n)")
    sweep.add_argument("--trials", type=int, default=100_000)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", default=None)

    form = sub.add_parser("formulas", help="closed-form table for given (n, m, N, distribution)")
    form.add_argument("--dist", type=parse_distribution,
                      default=parse_distribution("gaussian:1"))
    form.add_argument("--n", type=int, default=10)
    form.add_argument("--m", type=int, default=10)
    form.add_argument("--N", type=int, default=20)
    form.add_argument("--q", type=int, default=None,
                      help="also report q * min_N, the adaptive-procedure bag count")
    form.add_argument("--out", default=None)

    oracle = sub.add_parser("oracle", help="enumeration cross-checks for tiny datasets (diagnostic)")
    oracle.add_argument("--data", type=data_list, default=(0.0, 1.0),
                        help="comma-separated values, e.g. 0,1")
    oracle.add_argument("--m", type=int, default=2)
    oracle.add_argument("--N", type=int, default=None)
    oracle.add_argument("--max-states", type=int, default=10_000_000)
    oracle.add_argument("--out", default=None)
    return parser


def _emit(fieldnames, rows, out: Optional[str], as_table: bool):
    if out is not None:
        experiments.write_csv(out, fieldnames, rows)
    elif as_table:
        print(experiments.rows_as_table(fieldnames, rows))
    else:
        sys.stdout.write(experiments.rows_to_csv_text(fieldnames, rows))


def _dispatch(args) -> None:
    if args.experiment == "regression":
        cfg = experiments.RegressionConfig(
            n_samples=args.samples,
            n_features=args.features,
            noise_sigmas=tuple(args.noise),
            train_frac=args.train_frac,
            n_grid=tuple(args.n_grid),
            bag_trials=args.trials,
            dataset_trials=args.datasets,
            m=args.m,
            seed=args.seed,
        )
        rows = experiments.run_regression_experiment(cfg)
        _emit(experiments.REGRESSION_FIELDS, rows, args.out, as_table=False)
    elif args.experiment == "mse-gap":
        cfg = experiments.MseGapConfig(
            dists=tuple(args.dist) if args.dist else experiments.MseGapConfig.dists,
            n_grid=tuple(args.n_grid),
            N=args.N,
            trials=args.trials,
            seed=args.seed,
            m=args.m,
        )
        rows = experiments.run_mse_gap_experiment(cfg)
        _emit(experiments.MSE_GAP_FIELDS, rows, args.out, as_table=False)
    elif args.experiment == "kurtosis-sweep":
        kwargs = dict(
            a=args.a,
            n=args.n,
            N=args.N,
            trials=args.trials,
            seed=args.seed,
            m=args.m,
        )
        if args.p_grid is not None:
            kwargs["p_grid"] = tuple(args.p_grid)
        rows = experiments.run_kurtosis_sweep(experiments.KurtosisSweepConfig(**kwargs))
        _emit(experiments.KURTOSIS_SWEEP_FIELDS, rows, args.out, as_table=False)
    elif args.experiment == "formulas":
        cfg = experiments.FormulasConfig(dist=args.dist, n=args.n, m=args.m, N=args.N)
        rows = experiments.run_formulas(cfg)
        fields = experiments.FORMULAS_FIELDS
        if args.q is not None:
            fields = fields + ("suggested_N",)
            for row in rows:
                min_n = row["min_N"]
                row["suggested_N"] = (
                    None if min_n is None else args.q * min_n
                )
        _emit(fields, rows, args.out, as_table=True)
    elif args.experiment == "oracle":
        cfg = experiments.OracleConfig(
            data=args.data, m=args.m, N=args.N, max_states=args.max_states
        )
        rows = experiments.run_oracle(cfg)
        _emit(experiments.ORACLE_FIELDS, rows, args.out, as_table=True)
    else:  # pragma: no cover - argparse enforces the choices
        raise ValueError(f"unknown experiment {args.experiment!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"bagcheck: error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
