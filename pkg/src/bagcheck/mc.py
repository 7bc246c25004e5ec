"""Vectorized Monte-Carlo harness for the variance estimators.

Trials are processed in fixed-size chunks; each chunk draws from its own
generator stream derived from (seed key..., chunk start), and partial
sums are reduced in chunk order.  Results are therefore bit-identical
for a given configuration and seed no matter how many workers run the
chunks.  The environment variable BAGCHECK_THREADS caps the worker pool
(default: serial).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .distributions import DistributionSpec, draw, population_moments

# Trials per chunk, sized so a chunk's index block stays a few MB.
_TARGET_ELEMS = 4_000_000
_MAX_CHUNK = 8192


def worker_cap(n_tasks: int) -> int:
    """Pool size: min(tasks, cpu count, BAGCHECK_THREADS if set)."""
    cap = os.cpu_count() or 1
    env = os.environ.get("BAGCHECK_THREADS")
    if env is not None:
        cap = min(cap, max(1, int(env)))
    else:
        cap = 1
    return max(1, min(n_tasks, cap))


def _map_ordered(fn, tasks):
    n_workers = worker_cap(len(tasks))
    if n_workers <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, tasks))


def _chunks(trials: int, per_trial_elems: int):
    size = min(_MAX_CHUNK, max(1, _TARGET_ELEMS // max(1, per_trial_elems)))
    return [(start, min(size, trials - start)) for start in range(0, trials, size)]


@dataclass(frozen=True)
class _Welford:
    """Summed statistics of one scalar per trial."""

    n: int
    total: float
    total_sq: float

    @property
    def mean(self):
        return self.total / self.n

    @property
    def stderr(self):
        if self.n < 2:
            return float("inf")
        var = (self.total_sq - self.total**2 / self.n) / (self.n - 1)
        return float(np.sqrt(max(var, 0.0) / self.n))


def _summed(values: np.ndarray) -> Tuple[float, float]:
    return float(values.sum()), float((values**2).sum())


@dataclass(frozen=True)
class VarianceMcSummary:
    """Paired Monte-Carlo results for the bagged and plain estimators.

    Squared errors are taken against the population variance; ``gap`` is
    the paired mean of (bagged error - plain error), whose stderr is much
    smaller than the difference of the individual stderrs.
    """

    trials: int
    mean_bagged: float
    mean_bagged_stderr: float
    mse_bagged: float
    mse_bagged_stderr: float
    mean_plain: float
    mse_plain: float
    mse_plain_stderr: float
    gap: float
    gap_stderr: float


def variance_mc(
    spec: DistributionSpec,
    n: int,
    m: int,
    N: int,
    trials: int,
    seed_key: Tuple[int, ...],
) -> VarianceMcSummary:
    """MC moments of the bagged and plain variance estimators.

    Per trial: draw a dataset of size n, compute the plain unbiased
    variance and the average of N unbiased variances over size-m bags
    (both from the same dataset, so the gap is paired).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    mu2 = population_moments(spec).mu2

    def run_chunk(chunk):
        start, count = chunk
        rng = np.random.default_rng((*seed_key, start))
        data = draw(spec, rng, (count, n))
        v_plain = data.var(axis=1, ddof=1)
        idx = rng.integers(0, n, size=(count, N, m))
        bags = data[np.arange(count)[:, None, None], idx]
        v_bag = bags.var(axis=2, ddof=1).mean(axis=1)
        err_bag = (v_bag - mu2) ** 2
        err_plain = (v_plain - mu2) ** 2
        return (
            _summed(v_bag),
            _summed(err_bag),
            _summed(v_plain),
            _summed(err_plain),
            _summed(err_bag - err_plain),
        )

    parts = _map_ordered(run_chunk, _chunks(trials, N * m + n))
    acc = [
        _Welford(trials, sum(p[k][0] for p in parts), sum(p[k][1] for p in parts))
        for k in range(5)
    ]
    w_bag, w_err_bag, w_plain, w_err_plain, w_gap = acc
    return VarianceMcSummary(
        trials=trials,
        mean_bagged=w_bag.mean,
        mean_bagged_stderr=w_bag.stderr,
        mse_bagged=w_err_bag.mean,
        mse_bagged_stderr=w_err_bag.stderr,
        mean_plain=w_plain.mean,
        mse_plain=w_err_plain.mean,
        mse_plain_stderr=w_err_plain.stderr,
        gap=w_gap.mean,
        gap_stderr=w_gap.stderr,
    )


def plain_variance_mse_mc(
    spec: DistributionSpec,
    n: int,
    trials: int,
    seed_key: Tuple[int, ...],
) -> Tuple[float, float]:
    """(MC MSE, stderr) of the plain unbiased variance estimator."""
    mu2 = population_moments(spec).mu2

    def run_chunk(chunk):
        start, count = chunk
        rng = np.random.default_rng((*seed_key, start))
        data = draw(spec, rng, (count, n))
        return _summed((data.var(axis=1, ddof=1) - mu2) ** 2)

    parts = _map_ordered(run_chunk, _chunks(trials, n))
    w = _Welford(trials, sum(p[0] for p in parts), sum(p[1] for p in parts))
    return w.mean, w.stderr
