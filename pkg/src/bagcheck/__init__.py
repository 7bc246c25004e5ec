"""Bagged statistical estimators with exact MSE accounting.

Library + CLI for studying when averaging an estimator over
with-replacement resamples ("bags") lowers its mean squared error.
Implements the bagged unbiased variance estimator, its exact closed-form
mean/variance/MSE, the kurtosis-based decision rule, an adaptive
high-precision variance procedure, and a brute-force enumeration oracle
that everything is tested against.
"""

from .bagging import BagConfig, VarianceEstimate, bag_estimate, draw_bag, estimate_variance
from .closed_form import (
    MseBreakdown,
    bagged_variance_mean,
    bagging_beneficial,
    expected_resampling_variance,
    min_iterations,
    mse_bagged_variance,
    mse_gap,
    mse_standard_variance,
    variance_of_resampling_mean,
)
from .distributions import (
    DistributionSpec,
    Gaussian,
    Rademacher,
    TwoPointPair,
    Uniform,
    bagging_gap_constant,
    format_distribution,
    parse_distribution,
    population_moments,
    sample,
)
from .exact_oracle import (
    bag_average_variance,
    bag_average_variance_squared,
    bagset_second_moment_coeffs,
    enumerate_bag_moments,
    enumerate_bagset_moments,
    exact_values,
)
from .moments import (
    Moments,
    central_fourth_moment,
    expected_pairwise_sums,
    pairwise_symmetric_sums,
    sample_mean,
    sample_moments,
    unbiased_variance,
    unbiased_variance_pairwise,
)

__version__ = "0.1.0"

__all__ = [
    "BagConfig",
    "DistributionSpec",
    "Gaussian",
    "Moments",
    "MseBreakdown",
    "Rademacher",
    "TwoPointPair",
    "Uniform",
    "VarianceEstimate",
    "bag_average_variance",
    "bag_average_variance_squared",
    "bag_estimate",
    "bagged_variance_mean",
    "bagging_beneficial",
    "bagging_gap_constant",
    "bagset_second_moment_coeffs",
    "central_fourth_moment",
    "draw_bag",
    "enumerate_bag_moments",
    "enumerate_bagset_moments",
    "estimate_variance",
    "exact_values",
    "expected_pairwise_sums",
    "expected_resampling_variance",
    "format_distribution",
    "min_iterations",
    "mse_bagged_variance",
    "mse_gap",
    "mse_standard_variance",
    "pairwise_symmetric_sums",
    "parse_distribution",
    "population_moments",
    "sample",
    "sample_mean",
    "sample_moments",
    "unbiased_variance",
    "unbiased_variance_pairwise",
    "variance_of_resampling_mean",
]
