"""Exact Monte-Carlo goodness-of-fit tests for discrete distributions.

The root-mean-square statistic is offered alongside Pearson's chi-square,
the log-likelihood-ratio (G^2), Freeman-Tukey and the negative
log-likelihood.  Significance levels are never taken from asymptotic
tables; they are estimated by simulating from the fitted model.
"""

__version__ = "0.1.0"

from discretegof.statistics import (
    DimensionError,
    StatisticKind,
    chi_square,
    evaluate,
    freeman_tukey,
    g_square,
    neg_log_likelihood,
    rms,
)
from discretegof.families import (
    FitResult,
    ModelFamily,
    Parameter,
    family_from_id,
    sample,
)
from discretegof.engine import (
    StatisticResult,
    TestReport,
    exact_test,
    null_pvalue_distribution,
    std_error,
)
from discretegof.rng import RngStream
from discretegof.power import PowerConfig, PowerPoint, catalog_experiment, minimal_m, power_at

__all__ = [
    "__version__",
    "DimensionError",
    "StatisticKind",
    "rms",
    "chi_square",
    "g_square",
    "freeman_tukey",
    "neg_log_likelihood",
    "evaluate",
    "FitResult",
    "ModelFamily",
    "Parameter",
    "family_from_id",
    "sample",
    "RngStream",
    "StatisticResult",
    "TestReport",
    "exact_test",
    "null_pvalue_distribution",
    "std_error",
    "PowerConfig",
    "PowerPoint",
    "catalog_experiment",
    "minimal_m",
    "power_at",
]
