"""Guaranteed fixed-width Monte Carlo estimation of Bernoulli probabilities."""

from .bounds import (
    TailBound,
    hoeffding_tail,
    n_chebyshev,
    n_clt,
    n_hoeffding,
    normal_cdf,
    normal_quantile,
    sample_size,
)
from .core import (
    BernoulliSource,
    ErrorSpec,
    EstimateReport,
    IntervalEstimate,
    IntervalMethod,
    InvalidSpecError,
    Method,
    SampleSizePlan,
    StreamExhaustedError,
    StreamParseError,
    StreamSource,
    SyntheticSource,
    UnrepresentableSampleSize,
    draw_batch,
    make_error_spec,
)
from .estimator import BatchSchedule, MeanMCBer, mean_mc_ber_g
from .experiments import (
    RatioRow,
    ReplicationRow,
    run_coverage_sweep,
    run_ratio_curve,
    run_replication_study,
)
from .intervals import (
    CoverageReport,
    adjusted_wald_interval,
    binom_pmf_row,
    clopper_pearson_interval,
    exact_coverage,
    exact_two_sided_tail,
    fixed_width_interval,
    interval_coverage,
    wald_interval,
)

__version__ = "0.1.0"

__all__ = [
    "TailBound",
    "hoeffding_tail",
    "n_chebyshev",
    "n_clt",
    "n_hoeffding",
    "normal_cdf",
    "normal_quantile",
    "sample_size",
    "BernoulliSource",
    "ErrorSpec",
    "EstimateReport",
    "IntervalEstimate",
    "IntervalMethod",
    "InvalidSpecError",
    "Method",
    "SampleSizePlan",
    "StreamExhaustedError",
    "StreamParseError",
    "StreamSource",
    "SyntheticSource",
    "UnrepresentableSampleSize",
    "draw_batch",
    "make_error_spec",
    "BatchSchedule",
    "MeanMCBer",
    "mean_mc_ber_g",
    "RatioRow",
    "ReplicationRow",
    "run_coverage_sweep",
    "run_ratio_curve",
    "run_replication_study",
    "CoverageReport",
    "adjusted_wald_interval",
    "binom_pmf_row",
    "clopper_pearson_interval",
    "exact_coverage",
    "exact_two_sided_tail",
    "fixed_width_interval",
    "interval_coverage",
    "wald_interval",
]
