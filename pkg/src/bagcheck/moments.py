"""Sample moments and symmetric pairwise-difference sums.

Everything in this module is plain-Python arithmetic on purpose: fed
floats it returns floats, fed `fractions.Fraction` values it stays exact.
The enumeration oracle relies on the exact path for its bit-level
cross-checks, so resist the urge to vectorize here; the fast numpy paths
live next to the Monte-Carlo harness instead.

Index conventions (pinned; the expansion identity below is the arbiter):
every sum written over "pairs" ranges over *unordered* index sets.  With
that convention

    P = sum over pairs {i,j}            of (x_i - x_j)^4
    Q = sum over pivot i, pairs {j,k}   of (x_i - x_j)^2 (x_i - x_k)^2
        with j, k != i
    R = sum over disjoint pairs of pairs of (x_i - x_j)^2 (x_k - x_l)^2

and (sum over pairs of (x_i - x_j)^2)^2 == P + 2*Q + 2*R holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence


def _validated(values: Sequence, min_size: int = 1) -> list:
    vals = list(values)
    if not vals:
        raise ValueError("empty dataset")
    if len(vals) < min_size:
        raise ValueError("need at least 2 observations")
    for v in vals:
        if not math.isfinite(v):
            raise ValueError("dataset contains non-finite values")
    return vals


@dataclass(frozen=True)
class Moments:
    """Second and fourth central moments of a distribution or sample.

    ``kurtosis`` is ``mu4 / mu2**2`` and is ``None`` (never NaN) when
    ``mu2 == 0``.  Population-sourced moments must satisfy the
    Cauchy-Schwarz bound ``mu4 >= mu2**2`` (kurtosis >= 1); sample
    estimates may violate it.
    """

    mu2: float
    mu4: float
    source: str = "population"
    kurtosis: Optional[float] = None

    def __post_init__(self):
        if self.source not in ("population", "sample"):
            raise ValueError(f"unknown moments source: {self.source!r}")
        if self.mu2 < 0 or self.mu4 < 0:
            raise ValueError("central even moments must be non-negative")
        if self.source == "population" and self.mu4 < self.mu2**2 * (1 - 1e-9):
            raise ValueError("population moments violate mu4 >= mu2^2")
        if self.kurtosis is None and self.mu2 > 0:
            object.__setattr__(self, "kurtosis", self.mu4 / self.mu2**2)


def sample_mean(values: Sequence) -> float:
    """Arithmetic mean; rejects empty input."""
    vals = _validated(values)
    return sum(vals) / len(vals)


def unbiased_variance(values: Sequence) -> float:
    """Unbiased sample variance, sum((x - mean)^2) / (n - 1)."""
    vals = _validated(values, min_size=2)
    n = len(vals)
    m = sum(vals) / n
    return sum((v - m) ** 2 for v in vals) / (n - 1)


def unbiased_variance_pairwise(values: Sequence) -> float:
    """Unbiased sample variance from pairwise differences.

    Computes sum over unordered pairs of (x_i - x_j)^2, divided by
    n*(n-1).  Algebraically identical to :func:`unbiased_variance`; kept
    as an independent route so the two can cross-check each other.
    """
    vals = _validated(values, min_size=2)
    n = len(vals)
    total = sum((a - b) ** 2 for a, b in combinations(vals, 2))
    return total / (n * (n - 1))


def central_fourth_moment(values: Sequence) -> float:
    """Fourth central moment with 1/n normalization (biased estimator)."""
    vals = _validated(values)
    n = len(vals)
    m = sum(vals) / n
    return sum((v - m) ** 4 for v in vals) / n


def sample_moments(values: Sequence) -> Moments:
    """Moments estimated from data: unbiased mu2, 1/n-normalized mu4.

    These are exactly the estimators the adaptive variance procedure
    plugs into its decision gate; no bias corrections are applied.
    """
    return Moments(
        mu2=unbiased_variance(values),
        mu4=central_fourth_moment(values),
        source="sample",
    )


def pairwise_symmetric_sums(values: Sequence):
    """The sums P, Q, R of squared pairwise differences (see module doc).

    Direct O(n^2)/O(n^3)/O(n^4) loops; this is an oracle for desk-scale
    n, not a production kernel.  For n < 4 the sums over unavailable
    index sets are 0.
    """
    vals = _validated(values)
    n = len(vals)
    d = [[0] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        d[i][j] = d[j][i] = (vals[i] - vals[j]) ** 2

    p_sum = sum(d[i][j] ** 2 for i, j in combinations(range(n), 2))
    q_sum = 0
    for i in range(n):
        rest = [j for j in range(n) if j != i]
        for j, k in combinations(rest, 2):
            q_sum += d[i][j] * d[i][k]
    r_sum = 0
    pairs = list(combinations(range(n), 2))
    for (a, b), (c, e) in combinations(pairs, 2):
        if len({a, b, c, e}) == 4:
            r_sum += d[a][b] * d[c][e]
    return p_sum, q_sum, r_sum


def expected_pairwise_sums(n: int, mom: Moments):
    """Expectations of P, Q, R over n i.i.d. draws with the given moments.

    E(P) = 3n(n-1) mu2^2 + n(n-1) mu4
    E(Q) = (3/2) n(n-1)(n-2) mu2^2 + (1/2) n(n-1)(n-2) mu4
    E(R) = (1/2) n(n-1)(n-2)(n-3) mu2^2

    Pairwise differences are translation invariant, so centering of the
    underlying variable is immaterial.
    """
    if n < 2:
        raise ValueError("need at least 2 observations")
    mu2, mu4 = mom.mu2, mom.mu4
    ep = 3 * n * (n - 1) * mu2**2 + n * (n - 1) * mu4
    eq = n * (n - 1) * (n - 2) * (3 * mu2**2 + mu4) / 2
    er = n * (n - 1) * (n - 2) * (n - 3) * mu2**2 / 2
    return ep, eq, er
