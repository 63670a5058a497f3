"""Facility selection under top-k distance-sum objectives.

The objective of rank k charges a facility the sum of its k largest
client distances; rank 1 is the familiar max distance and rank n the
total. This package computes those costs, picks facilities that are
simultaneously near-optimal for several ranks with proven worst-case
guarantees, generates the instances on which the guarantees are tight,
and verifies all of it empirically.
"""

__version__ = "0.1.0"

from .bounds import (
    MULTI_LIMIT,
    PAIR_LIMIT,
    BoundValue,
    beta_q,
    multi_guarantee,
    pair_bound_f,
    pair_bound_shared,
    pair_guarantee,
    shared_guarantee,
)
from .errors import CentrumError, DegenerateOptimum
from .generators import (
    gen_random_euclidean,
    gen_random_graph_metric,
    gen_tight_pair_line,
    gen_tight_pair_triangle,
    gen_tight_triple,
)
from .harness import (
    MultiSweepConfig,
    PairSweepConfig,
    VerificationReport,
    check_inequalities,
    emit_bound_curves,
    sweep_multi,
    sweep_pair,
)
from .metric import (
    MetricInstance,
    Violation,
    build_from_graph,
    build_from_matrix,
    build_from_points,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    validate_metric,
)
from .objectives import (
    CostProfile,
    ObjectiveSet,
    RatioGraph,
    approx_ratio,
    centrum_cost,
    cost_profile,
    optimal_facility,
    ratio_graph,
)
from .selection import (
    SelectionResult,
    select_exhaustive,
    select_largest_objective,
    select_multi_graph,
    select_pair,
)

__all__ = [
    "BoundValue",
    "CentrumError",
    "CostProfile",
    "DegenerateOptimum",
    "MetricInstance",
    "MultiSweepConfig",
    "MULTI_LIMIT",
    "ObjectiveSet",
    "PAIR_LIMIT",
    "PairSweepConfig",
    "RatioGraph",
    "SelectionResult",
    "VerificationReport",
    "Violation",
    "approx_ratio",
    "beta_q",
    "build_from_graph",
    "build_from_matrix",
    "build_from_points",
    "centrum_cost",
    "check_inequalities",
    "cost_profile",
    "emit_bound_curves",
    "gen_random_euclidean",
    "gen_random_graph_metric",
    "gen_tight_pair_line",
    "gen_tight_pair_triangle",
    "gen_tight_triple",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "multi_guarantee",
    "optimal_facility",
    "pair_bound_f",
    "pair_bound_shared",
    "pair_guarantee",
    "ratio_graph",
    "save_instance",
    "select_exhaustive",
    "select_largest_objective",
    "select_multi_graph",
    "select_pair",
    "shared_guarantee",
    "sweep_multi",
    "sweep_pair",
    "validate_metric",
]
