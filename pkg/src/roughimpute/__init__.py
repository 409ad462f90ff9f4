"""Rough-set engine and imputer for incomplete categorical decision tables."""

__version__ = "0.1.0"

from .approximations import Approximation, BoundaryReport, Method, approximate, boundary, rough_membership
from .belongingness import (
    Mode,
    WeightedFamily,
    indiscernibility_degree,
    value_distribution,
    weighted_equivalence_family,
    weighted_indiscernibility,
)
from .errors import RoughSetError
from .harness import (
    AccuracyReport,
    MaskPlan,
    SynthSpec,
    evaluate_imputation,
    format_grid,
    generate_synthetic,
    mask_cells,
)
from .imputer import (
    CandidateSet,
    ImputationConfig,
    ImputationLog,
    Selection,
    Source,
    approximation_candidates,
    exact_match_candidates,
    impute,
    order_attributes,
    select_value,
)
from .partitions import (
    CharacteristicSet,
    EquivalenceFamily,
    characteristic_set,
    decision_concepts,
    equivalence_family,
    indiscernibility_pairs,
)
from .prep import BinSpec, ValidityRule, apply_bins, default_bins, filter_invalid, load_bins
from .table import (
    AttributeSchema,
    Cell,
    DecisionTable,
    cell_value,
    effective_domain,
    known_attributes,
    load_schema,
    parse_table,
)
