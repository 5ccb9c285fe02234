"""Goodness-of-fit testing via partial bubble sorting.

Partially sorting a sample and comparing the running-maximum frontier to
its theoretical limit yields a test that is sensitive to both the order
and the distribution of the data, generalizing the Kolmogorov-Smirnov
test (recovered exactly at full sorting).
"""

from .curves import BubbleCurve, StepFunction, empirical_bubble_curve, empirical_curve_from_raw, sup_distance
from .gkdist import GkDist, kolmogorov_cdf, psi, tabulate
from .psort import OnePositions, SortLevel, binary_positions_after_k, frontier_position, frontier_profile, partial_bubble_sort, swap_pass
from .simlab import (
    BridgeOracle,
    CovarianceCheck,
    NullDistribution,
    PowerResult,
    QueueConfig,
    SimConfig,
    bridge_oracle,
    covariance_check,
    example1_hidden_sort,
    example2_queue,
    limit_covariance,
    null_statistic_distribution,
    simulate_queue,
)
from .testkit import (
    DistributionSpec,
    TestReport,
    bubble_sort_test,
    bubble_statistic,
    ks_statistic,
    ks_test,
    parse_distribution,
    registry_lookup,
    ww_runs_test,
)

__version__ = "0.1.0"

__all__ = [
    "BubbleCurve",
    "StepFunction",
    "empirical_bubble_curve",
    "empirical_curve_from_raw",
    "sup_distance",
    "GkDist",
    "kolmogorov_cdf",
    "psi",
    "tabulate",
    "OnePositions",
    "SortLevel",
    "binary_positions_after_k",
    "frontier_position",
    "frontier_profile",
    "partial_bubble_sort",
    "swap_pass",
    "BridgeOracle",
    "CovarianceCheck",
    "NullDistribution",
    "PowerResult",
    "QueueConfig",
    "SimConfig",
    "bridge_oracle",
    "covariance_check",
    "example1_hidden_sort",
    "example2_queue",
    "limit_covariance",
    "null_statistic_distribution",
    "simulate_queue",
    "DistributionSpec",
    "TestReport",
    "bubble_sort_test",
    "bubble_statistic",
    "ks_statistic",
    "ks_test",
    "parse_distribution",
    "registry_lookup",
    "ww_runs_test",
]
