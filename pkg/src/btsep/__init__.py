"""Bradley-Terry paired-comparison fits that detect degenerate maximum-likelihood estimates."""

from .datamodel import (
    DataError,
    Dataset,
    GameRecord,
    ModelKind,
    Outcome,
    TeamId,
    apply_half_win_transform,
    build_dataset,
    parse_dataset,
    read_dataset,
    serialize_dataset,
)
from .estimation import (
    ConvergenceError,
    FitError,
    FitOptions,
    FitResult,
    ProbEstimate,
    ProbMatrix,
    Status,
    check_likelihood_equations,
    degenerate_probability,
    fit,
    log_likelihood,
    probability_matrix,
)
from .separation import (
    GlobalClass,
    Item,
    ItemGraph,
    PairRelation,
    SeparationResult,
    assign_levels,
    direct_relations,
    pair_relation,
    saturate,
    transitive_closure,
)
from .summary import PointSystem, RoundRobinSummary, rank, round_robin_outcomes, rrppg, rrwp, summarize

__all__ = [name for name in dir() if not name.startswith("_")]
