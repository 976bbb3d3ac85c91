"""Parameterized discrete model families with maximum-likelihood fits."""

from discretegof.families.base import (
    FitError,
    FitResult,
    ModelFamily,
    Parameter,
    check_probability_vector,
    log_likelihood,
    rank_order,
    sample,
)
from discretegof.families.catalog import (
    FAMILY_IDS,
    UNBOUNDED_SUPPORT,
    family_from_id,
    geometric_family,
    hardy_weinberg_family,
    head_fitted_power_law,
    pad_counts,
    poisson_family,
    poisson_support,
    structured_family,
    symmetry_family,
    zipf_family,
)
from discretegof.families.composite import HeadFitted, head_fitted_family
from discretegof.families.discrete import (
    RebinnedGeometric,
    TruncatedPoisson,
    WeightedGeometric,
    Zipf,
    butterfly_family,
)
from discretegof.families.shapes import (
    FullySpecified,
    fully_specified,
    heavy_head,
    power_law,
    truncated_geometric,
    truncated_poisson,
    uniform,
)
from discretegof.families.structured import (
    IntegerSplit,
    Paired,
    Permuted,
    ThreePoint,
    TwoPoint,
    step_permuted,
)
from discretegof.families.tables import (
    HardyWeinberg,
    Symmetry,
    flatten_triangle,
    triangle_pairs,
)
