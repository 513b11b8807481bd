"""Staged maturity assessment engine for IT service outsourcing governance."""

from .model import (
    Concept,
    Indicator,
    MaturityModel,
    SubRequirement,
    derive_subrequirements,
    lint_model,
    load_model,
    load_seed_model,
)
from .scoring import (
    Answer,
    Degree,
    Fulfillment,
    NotApplicable,
    ResponseSet,
    ScoreReport,
    ScoringPolicy,
    brute_force_level,
    compute_score,
    fulfills,
    what_if,
)
from .planner import (
    ActionPlan,
    BenchmarkTable,
    DeltaReport,
    GapReport,
    MeasurementCycle,
    Target,
    compare_assessments,
    identify_gaps,
    recommend_actions,
    remeasure,
    set_target,
    start_cycle,
)

__version__ = "0.1.0"
