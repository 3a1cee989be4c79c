"""Oblivious stacking and MAX k-CUT evaluation for interval overlap graphs.

A library for the single-pass stacking rule that colors each storage-time
interval from its own center alone, together with exact conflict-risk
formulas, Monte Carlo verification machinery, overlap-graph construction,
and small exact / greedy MAX k-CUT solvers for oracle duty.
"""

from .analysis import (
    EstimatorResult,
    PairProbabilityEstimates,
    UndefinedConditionalError,
    estimate_pair_probabilities,
    expected_cut_ratio,
    extended_upper_bound_p_ov_given_sc,
    distance_density,
    p_ov,
    p_ov_given_center,
    p_ov_given_sc,
    p_sc_given_ov,
    p_si_given_sc,
    verify_lemma1_pointwise,
)
from .coloring import (
    Coloring,
    ColorRule,
    assign_color,
    assign_colors,
    color_instance,
    random_coloring,
)
from .graph import (
    CutStats,
    OverlapGraph,
    build_overlap_graph,
    count_overlapping_pairs,
    evaluate_cut,
    greedy_kcut,
    max_kcut_exact,
    overlaps,
)
from .model import (
    Interval,
    LengthDensity,
    ModelParams,
    default_length_rule,
    generate_extended,
    generate_scheinerman,
    validate_assumption,
)

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "ModelParams",
    "LengthDensity",
    "validate_assumption",
    "default_length_rule",
    "generate_scheinerman",
    "generate_extended",
    "ColorRule",
    "Coloring",
    "assign_color",
    "assign_colors",
    "color_instance",
    "random_coloring",
    "OverlapGraph",
    "CutStats",
    "overlaps",
    "build_overlap_graph",
    "count_overlapping_pairs",
    "evaluate_cut",
    "max_kcut_exact",
    "greedy_kcut",
    "p_ov_given_center",
    "distance_density",
    "p_si_given_sc",
    "p_ov_given_sc",
    "p_ov",
    "p_sc_given_ov",
    "expected_cut_ratio",
    "extended_upper_bound_p_ov_given_sc",
    "EstimatorResult",
    "PairProbabilityEstimates",
    "UndefinedConditionalError",
    "estimate_pair_probabilities",
    "verify_lemma1_pointwise",
    "__version__",
]
