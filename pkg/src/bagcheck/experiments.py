"""Experiment runners behind the CLI; each emits deterministic CSV rows.

Three studies at desk scale, plus two diagnostic commands:

* ``regression``     -- test MSE of bagged least-squares / tree predictors
                        as the number of bags N grows, with an a + b/N fit.
* ``mse-gap``        -- Monte-Carlo vs exact MSE difference between the
                        bagged and plain variance estimators across n.
* ``kurtosis-sweep`` -- the two MSEs along a family whose kurtosis crosses
                        3/2, locating where the curves intersect.
* ``formulas``       -- table of the closed-form quantities.
* ``oracle``         -- enumeration cross-checks for tiny inputs.

Default trial counts finish in minutes on one core; raise them via the
CLI flags to approach publication-scale averages.  Every row set is a
pure function of (config, seed); floats are written with 17 significant
digits so the CSV round-trips doubles exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import closed_form, exact_oracle
from .distributions import (
    DistributionSpec,
    Gaussian,
    Rademacher,
    TwoPointPair,
    Uniform,
    format_distribution,
    population_moments,
)
from .mc import plain_variance_mse_mc, variance_mc
from .moments import unbiased_variance
from .regressors import (
    RegressionDataset,
    TreeParams,
    fit_base,
)

DEFAULT_N_GRID = (1, 2, 4, 8, 16, 32, 64)


# ---------------------------------------------------------------------------
# CSV plumbing
# ---------------------------------------------------------------------------

def format_cell(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    if value is None:
        return ""
    return str(value)


def write_csv(path, fieldnames: Sequence[str], rows: Sequence[dict]):
    """Comma-separated, '.' decimals, header row, 17 significant digits."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_cell(row[name]) for name in fieldnames])


def rows_to_csv_text(fieldnames: Sequence[str], rows: Sequence[dict]) -> str:
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(format_cell(row[name]) for name in fieldnames))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Experiment 1: bagged regression predictors, MSE vs N
# ---------------------------------------------------------------------------

REGRESSION_FIELDS = (
    "N",
    "mean_mse",
    "fitted_a",
    "fitted_b",
    "base_model",
    "noise_sigma",
    "mean_mse_stderr",
)


@dataclass(frozen=True)
class RegressionConfig:
    """Synthetic linear data; a small train split feeds the bagged models.

    The generator (standard-normal features, uniformly drawn positive
    coefficients, additive Gaussian noise) is a documented stand-in: the
    interest is the shape of MSE(N), not absolute values.
    """

    n_samples: int = 1000
    n_features: int = 2
    noise_sigmas: Tuple[float, ...] = (0.5, 5.0)
    train_frac: float = 0.05
    n_grid: Tuple[int, ...] = DEFAULT_N_GRID
    bag_trials: int = 30
    dataset_trials: int = 5
    base_models: Tuple[str, ...] = ("ols", "tree")
    m: Optional[int] = None
    seed: int = 0
    tree_params: TreeParams = field(default_factory=TreeParams)


def _make_regression_data(cfg: RegressionConfig, rng) -> RegressionDataset:
    x = rng.normal(size=(cfg.n_samples, cfg.n_features))
    coefs = rng.uniform(10.0, 100.0, size=cfg.n_features)
    return RegressionDataset(x, x @ coefs)


def fit_inverse_n(n_values, y_values) -> Tuple[float, float]:
    """Least-squares fit of y = a + b/N; returns (a, b)."""
    design = np.column_stack([np.ones(len(n_values)), 1.0 / np.asarray(n_values, float)])
    (a, b), *_ = np.linalg.lstsq(design, np.asarray(y_values, float), rcond=None)
    return float(a), float(b)


def run_regression_experiment(cfg: RegressionConfig) -> List[dict]:
    if cfg.dataset_trials < 1 or cfg.bag_trials < 1:
        raise ValueError("trial counts must be >= 1")
    n_grid = tuple(sorted(cfg.n_grid))
    n_max = n_grid[-1]
    rows = []
    for si, sigma in enumerate(cfg.noise_sigmas):
        for base in cfg.base_models:
            # mse_samples[g] collects one MSE per (dataset, bag trial).
            mse_samples = [[] for _ in n_grid]
            for ds in range(cfg.dataset_trials):
                data_rng = np.random.default_rng((cfg.seed, si, ds, 0))
                clean = _make_regression_data(cfg, data_rng)
                noisy = clean.targets + data_rng.normal(
                    0.0, sigma, size=cfg.n_samples
                )
                n_train = max(1, int(round(cfg.train_frac * cfg.n_samples)))
                perm = data_rng.permutation(cfg.n_samples)
                tr, te = perm[:n_train], perm[n_train:]
                train = RegressionDataset(clean.inputs[tr], noisy[tr])
                test_x, test_y = clean.inputs[te], noisy[te]
                m = cfg.m or n_train
                for trial in range(cfg.bag_trials):
                    bag_rng = np.random.default_rng((cfg.seed, si, ds, 1 + trial))
                    idx = bag_rng.integers(0, n_train, size=(n_max, m))
                    preds = np.empty((n_max, len(te)))
                    for j in range(n_max):
                        model = fit_base(
                            RegressionDataset(
                                train.inputs[idx[j]], train.targets[idx[j]]
                            ),
                            base,
                            cfg.tree_params,
                        )
                        preds[j] = model.predict(test_x)
                    # Prefix averages give every grid point from one pass;
                    # each point is still the exact N-bag average.
                    cum = np.cumsum(preds, axis=0)
                    for g, n_bags in enumerate(n_grid):
                        bagged = cum[n_bags - 1] / n_bags
                        mse_samples[g].append(float(np.mean((bagged - test_y) ** 2)))
            means = [float(np.mean(s)) for s in mse_samples]
            stderrs = [
                float(np.std(s, ddof=1) / math.sqrt(len(s))) if len(s) > 1 else 0.0
                for s in mse_samples
            ]
            a, b = fit_inverse_n(n_grid, means)
            for g, n_bags in enumerate(n_grid):
                rows.append(
                    {
                        "N": n_bags,
                        "mean_mse": means[g],
                        "fitted_a": a,
                        "fitted_b": b,
                        "base_model": base,
                        "noise_sigma": float(sigma),
                        "mean_mse_stderr": stderrs[g],
                    }
                )
    return rows


# ---------------------------------------------------------------------------
# Experiment 2: MSE gap of the bagged vs plain variance estimator
# ---------------------------------------------------------------------------

MSE_GAP_FIELDS = (
    "distribution",
    "n",
    "mc_gap",
    "exact_gap",
    "asymptotic_gap",
    "mc_stderr",
)


@dataclass(frozen=True)
class MseGapConfig:
    dists: Tuple[DistributionSpec, ...] = (
        Gaussian(1.0),
        Uniform(-1.0, 1.0),
        Rademacher(),
    )
    n_grid: Tuple[int, ...] = (8, 16, 24, 32, 40, 48)
    N: int = 50
    trials: int = 10_000
    seed: int = 0
    # Bags are full-size draws (m = n) unless overridden.
    m: Optional[int] = None


def run_mse_gap_experiment(cfg: MseGapConfig) -> List[dict]:
    rows = []
    for di, spec in enumerate(cfg.dists):
        mom = population_moments(spec)
        for n in cfg.n_grid:
            m = cfg.m or n
            summary = variance_mc(spec, n, m, cfg.N, cfg.trials, (cfg.seed, di, n))
            exact, asymptotic = closed_form.mse_gap(n, m, cfg.N, mom)
            rows.append(
                {
                    "distribution": format_distribution(spec),
                    "n": n,
                    "mc_gap": summary.gap,
                    "exact_gap": exact,
                    "asymptotic_gap": asymptotic,
                    "mc_stderr": summary.gap_stderr,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# Experiment 3: kurtosis sweep across the 3/2 threshold
# ---------------------------------------------------------------------------

KURTOSIS_SWEEP_FIELDS = (
    "p",
    "kurtosis",
    "mse_bagged_mc",
    "mse_plain_mc",
    "mse_bagged_exact",
    "mse_plain_exact",
    "mse_bagged_mc_stderr",
    "mse_plain_mc_stderr",
)


@dataclass(frozen=True)
class KurtosisSweepConfig:
    p_grid: Tuple[float, ...] = tuple(
        round(0.02 * k, 10) for k in range(1, 50)
    )  # 0.02 .. 0.98
    a: float = 0.125
    n: int = 10
    N: int = 20
    trials: int = 100_000
    seed: int = 0
    m: Optional[int] = None


def run_kurtosis_sweep(cfg: KurtosisSweepConfig) -> List[dict]:
    rows = []
    m = cfg.m or cfg.n
    for pi, p in enumerate(cfg.p_grid):
        if not 0 < p < 1:
            raise ValueError("p grid values must lie strictly inside (0, 1)")
        spec = TwoPointPair(p=p, a=cfg.a)
        mom = population_moments(spec)
        summary = variance_mc(spec, cfg.n, m, cfg.N, cfg.trials, (cfg.seed, pi))
        rows.append(
            {
                "p": float(p),
                "kurtosis": mom.kurtosis,
                "mse_bagged_mc": summary.mse_bagged,
                "mse_plain_mc": summary.mse_plain,
                "mse_bagged_exact": closed_form.mse_bagged_variance(
                    cfg.n, m, cfg.N, mom
                ).total,
                "mse_plain_exact": closed_form.mse_standard_variance(cfg.n, mom),
                "mse_bagged_mc_stderr": summary.mse_bagged_stderr,
                "mse_plain_mc_stderr": summary.mse_plain_stderr,
            }
        )
    return rows


def crossing_points(p_values: Sequence[float], gaps: Sequence[float]) -> List[float]:
    """p locations where the gap changes sign, linearly interpolated."""
    crossings = []
    for i in range(1, len(p_values)):
        g0, g1 = gaps[i - 1], gaps[i]
        if g0 == 0.0:
            crossings.append(float(p_values[i - 1]))
        elif g0 * g1 < 0:
            frac = g0 / (g0 - g1)
            crossings.append(
                float(p_values[i - 1] + frac * (p_values[i] - p_values[i - 1]))
            )
    if gaps and gaps[-1] == 0.0:
        crossings.append(float(p_values[-1]))
    return crossings


def exact_crossing_p(
    n: int,
    m: int,
    N: int,
    a: float,
    lo: float = 1e-6,
    hi: float = 1.0 - 1e-6,
    tol: float = 1e-10,
) -> Optional[float]:
    """Largest root in p of the exact MSE gap for the two-scale family.

    The kurtosis of the family is not monotone in p, so the gap can cross
    zero more than once; the descending branch (largest p) is the one the
    sweep resolves, and is what this returns.  Bisection on a fine grid.
    """

    def gap(p):
        mom = population_moments(TwoPointPair(p=p, a=a))
        return closed_form.mse_gap(n, m, N, mom)[0]

    grid = np.linspace(lo, hi, 2001)
    values = [gap(p) for p in grid]
    bracket = None
    for i in range(1, len(grid)):
        if values[i - 1] * values[i] <= 0 and values[i - 1] != values[i]:
            bracket = (grid[i - 1], grid[i])
    if bracket is None:
        return None
    left, right = bracket
    g_left = gap(left)
    while right - left > tol:
        mid = (left + right) / 2
        g_mid = gap(mid)
        if g_left * g_mid <= 0:
            right = mid
        else:
            left, g_left = mid, g_mid
    return float((left + right) / 2)


# ---------------------------------------------------------------------------
# Diagnostics: formulas table and enumeration oracle
# ---------------------------------------------------------------------------

FORMULAS_FIELDS = (
    "distribution",
    "n",
    "m",
    "N",
    "E",
    "F",
    "G_var",
    "bias2",
    "MSE_bagged",
    "MSE_standard",
    "gap",
    "min_N",
)


@dataclass(frozen=True)
class FormulasConfig:
    dist: DistributionSpec = Gaussian(1.0)
    n: int = 10
    m: int = 10
    N: int = 20


def run_formulas(cfg: FormulasConfig) -> List[dict]:
    mom = population_moments(cfg.dist)
    breakdown = closed_form.mse_bagged_variance(cfg.n, cfg.m, cfg.N, mom)
    exact_gap, _ = closed_form.mse_gap(cfg.n, cfg.m, cfg.N, mom)
    return [
        {
            "distribution": format_distribution(cfg.dist),
            "n": cfg.n,
            "m": cfg.m,
            "N": cfg.N,
            "E": closed_form.bagged_variance_mean(cfg.n, mom),
            "F": breakdown.resampling_variance,
            "G_var": breakdown.dataset_variance,
            "bias2": breakdown.bias_squared,
            "MSE_bagged": breakdown.total,
            "MSE_standard": closed_form.mse_standard_variance(cfg.n, mom),
            "gap": exact_gap,
            "min_N": closed_form.min_iterations(cfg.n, cfg.m, mom),
        }
    ]


ORACLE_FIELDS = (
    "n",
    "m",
    "N",
    "EU_mean",
    "EU_second_moment",
    "closed_form_mean",
    "closed_form_second_moment",
    "C1",
    "C2",
    "coeff_identity_residual",
)


@dataclass(frozen=True)
class OracleConfig:
    data: Tuple[float, ...] = (0.0, 1.0)
    m: int = 2
    N: Optional[int] = None
    max_states: int = exact_oracle.MAX_STATES_DEFAULT


def run_oracle(cfg: OracleConfig) -> List[dict]:
    exact = exact_oracle.exact_values(cfg.data)
    mean, second = exact_oracle.enumerate_bag_moments(
        exact, cfg.m, unbiased_variance, max_states=cfg.max_states
    )
    n = len(cfg.data)
    n_iter = cfg.N or 1
    c1, c2 = exact_oracle.bagset_second_moment_coeffs(n, cfg.m, n_iter, exact=True)
    nm = n**cfg.m
    residual = c1 * nm + c2 * nm * (nm - 1) - 1
    return [
        {
            "n": n,
            "m": cfg.m,
            "N": n_iter,
            "EU_mean": float(mean),
            "EU_second_moment": float(second),
            "closed_form_mean": float(exact_oracle.bag_average_variance(exact)),
            "closed_form_second_moment": float(
                exact_oracle.bag_average_variance_squared(exact, cfg.m)
            ),
            "C1": float(c1),
            "C2": float(c2),
            "coeff_identity_residual": float(residual),
        }
    ]


def rows_as_table(fieldnames: Sequence[str], rows: Sequence[dict]) -> str:
    """Fixed-width text rendering for terminal output."""
    cells = [[format_cell(row[name]) for name in fieldnames] for row in rows]
    widths = [
        max(len(name), *(len(row[i]) for row in cells)) if cells else len(name)
        for i, name in enumerate(fieldnames)
    ]
    lines = ["  ".join(name.ljust(w) for name, w in zip(fieldnames, widths))]
    for row in cells:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)
