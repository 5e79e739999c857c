"""Sampled pairwise elicitation of Borda rankings and Condorcet winners."""

from .behavior import (
    ExistenceSummary,
    RatingEvent,
    TimingRecord,
    TransitionMatrix,
    condorcet_existence_summary,
    rating_transition,
    time_per_comparison,
)
from .model import (
    ComparisonLog,
    ComparisonRecord,
    PreferenceProfile,
    Violation,
    expand_profile,
    expand_ranking_to_comparisons,
    profile_from_rankings,
    validate_profile,
)
from .replay import (
    ConvergenceTrajectory,
    LinearFit,
    ThresholdPoint,
    default_grid,
    extrapolate_per_participant,
    fit_linear,
    replay_trajectory,
    threshold_crossing,
)
from .sampler import (
    ComparisonOracle,
    IncomparablePairError,
    SampleBudget,
    algorithm1,
    epsilon_condorcet_search,
    suggested_samples,
)
from .social_choice import (
    PairwiseTally,
    achieved_epsilon,
    borda_ranking,
    borda_scores,
    borda_scores_from_comparisons,
    condorcet_winner,
    is_epsilon_borda_winner,
    is_epsilon_condorcet_winner,
    normalize,
    pairwise_tally,
)
from .synthetic import (
    IncomparableError,
    MallowsParams,
    gen_impartial_culture,
    gen_mallows,
    oracle_from_profile,
)

__version__ = "0.1.0"
