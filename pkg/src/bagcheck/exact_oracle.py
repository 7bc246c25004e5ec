"""Brute-force enumeration over every with-replacement resampling.

Ground truth engine: for a fixed dataset of size n and bag size m there
are exactly n**m equally likely bags, and (n**m)**N equally likely bag
sets.  At desk scale those spaces can be enumerated outright, which is
what every closed-form expression in this package is tested against.

All enumeration is done in the arithmetic of the input values: pass
floats and you get floats, pass `fractions.Fraction` values (see
:func:`exact_values`) and every returned moment is exact, so equalities
like "the bag-set mean does not depend on N" can be asserted bit-for-bit.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Sequence, Tuple

from .moments import _validated, pairwise_symmetric_sums

MAX_STATES_DEFAULT = 10_000_000

EstimatorFn = Callable[[Sequence], float]


def exact_values(values: Sequence) -> tuple:
    """Convert floats to exact Fractions (floats are dyadic rationals)."""
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


def _check_states(states: int, max_states: int, label: str):
    if states > max_states:
        raise ValueError(
            f"state space too large: {label} = {states} exceeds max_states = {max_states}"
        )


def enumerate_bag_moments(
    data: Sequence,
    m: int,
    est: EstimatorFn,
    max_states: int = MAX_STATES_DEFAULT,
) -> Tuple[float, float]:
    """Exact first and second moment of est over all n**m bags.

    Iterates every multi-index in {0..n-1}^m in odometer order with equal
    weight n**-m.  The resampling variance follows as
    ``second_moment - mean**2``.
    """
    vals = tuple(_validated(data))
    n = len(vals)
    if m < 1:
        raise ValueError("bag size m must be >= 1")
    states = n**m
    _check_states(states, max_states, "n^m")
    total = 0
    total_sq = 0
    for idx in product(range(n), repeat=m):
        t = est(tuple(vals[i] for i in idx))
        total += t
        total_sq += t * t
    return total / states, total_sq / states


def bag_average_variance(data: Sequence):
    """Average of the unbiased variance over all bags, in closed form.

    Equals (1/n^2) * sum over unordered pairs of (x_j - x_k)^2, for any
    bag size m >= 2 (the m-dependence cancels).
    """
    vals = _validated(data, min_size=2)
    n = len(vals)
    total = 0
    for j in range(n):
        for k in range(j + 1, n):
            total += (vals[j] - vals[k]) ** 2
    return total / (n * n)


def bag_average_variance_squared(data: Sequence, m: int):
    """Average of the squared unbiased variance over all bags, closed form.

    A weighted combination of the symmetric sums P, Q, R with exact
    rational coefficients:

        cP = 1/(n^2 m(m-1)) + 2(m-2)/(n^3 m(m-1)) + (m-2)(m-3)/(n^4 m(m-1))
        cQ = 2(m-2)/(n^3 m(m-1)) + 2(m-2)(m-3)/(n^4 m(m-1))
        cR = 2(m-2)(m-3)/(n^4 m(m-1))

    At m = 2 everything but the leading P term vanishes.
    """
    vals = _validated(data, min_size=2)
    if m < 2:
        raise ValueError("bag size m must be >= 2")
    n = len(vals)
    p_sum, q_sum, r_sum = pairwise_symmetric_sums(vals)
    denom = m * (m - 1)
    c_p = (
        Fraction(1, n**2 * denom)
        + Fraction(2 * (m - 2), n**3 * denom)
        + Fraction((m - 2) * (m - 3), n**4 * denom)
    )
    c_q = Fraction(2 * (m - 2), n**3 * denom) + Fraction(
        2 * (m - 2) * (m - 3), n**4 * denom
    )
    c_r = Fraction(2 * (m - 2) * (m - 3), n**4 * denom)
    return c_p * p_sum + c_q * q_sum + c_r * r_sum


def bagset_second_moment_coeffs(n: int, m: int, N: int, exact: bool = False):
    """Coefficients (C1, C2) of the bag-set second moment.

    For any estimator, the average over all (n^m)^N bag sets of the
    squared N-bag average is

        C1 * sum_i est_i^2  +  C2 * sum_{i != j} est_i est_j

    (ordered pairs in the second sum), with

        C1 = ((N-1)/N) n^(-2m) + (1/N) n^(-m)
        C2 = ((N-1)/N) n^(-2m)

    and the normalization C1*n^m + C2*n^m*(n^m - 1) == 1.  Computed in
    exact rationals; the float conversion raises if it would underflow
    to zero.
    """
    if n < 1 or m < 1 or N < 1:
        raise ValueError("need n, m, N >= 1")
    nm = n**m
    c1 = Fraction(N - 1, N) * Fraction(1, nm * nm) + Fraction(1, N) * Fraction(1, nm)
    c2 = Fraction(N - 1, N) * Fraction(1, nm * nm)
    if exact:
        return c1, c2
    f1, f2 = float(c1), float(c2)
    if (c1 > 0 and f1 == 0.0) or (c2 > 0 and f2 == 0.0):
        raise ValueError(
            f"coefficients underflow double precision for n={n}, m={m}; use exact=True"
        )
    return f1, f2


def enumerate_bagset_moments(
    data: Sequence,
    m: int,
    N: int,
    est: EstimatorFn,
    max_states: int = MAX_STATES_DEFAULT,
) -> Tuple[float, float]:
    """Exact moments of the N-bag average over all (n^m)^N bag sets.

    Evaluates est once per bag, then walks the full bag-set space in
    odometer order.  Only feasible for tiny n, m, N; that is the point.
    """
    vals = tuple(_validated(data))
    n = len(vals)
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    per_bag = n**m
    _check_states(per_bag, max_states, "n^m")
    states = per_bag**N
    _check_states(states, max_states, "(n^m)^N")
    theta = [
        est(tuple(vals[i] for i in idx)) for idx in product(range(n), repeat=m)
    ]
    total = 0
    total_sq = 0
    for combo in product(range(per_bag), repeat=N):
        t = sum(theta[i] for i in combo) / N
        total += t
        total_sq += t * t
    return total / states, total_sq / states
