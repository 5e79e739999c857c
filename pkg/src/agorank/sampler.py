"""Sampled elicitation of Borda rankings and epsilon-Condorcet winners.

:func:`algorithm1` asks N random (participant, pair) questions and ranks
ideas by how many they won. :func:`suggested_samples` gives the matching
N = C * m / eps^2 * ln(m / delta) budget; the constant C is not pinned
down by the analysis, so it is a parameter.

:func:`epsilon_condorcet_search` is our own construction. The sub-quadratic
Condorcet variant this package is modelled on was announced without
details, so this version simply estimates every head-to-head share from a
fixed number of sampled voters and applies the epsilon-Condorcet test to
the estimates. Its cost is m(m-1)/2 * t queries, which is not claimed to
match the announced bound.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations
from typing import Protocol, runtime_checkable

import numpy as np

from .model import IdeaId, ParticipantId, Ranking
from .rng import make_rng
from .social_choice import (
    PairwiseTally,
    ScoreVector,
    borda_ranking,
    epsilon_condorcet_rivals,
)


@runtime_checkable
class ComparisonOracle(Protocol):
    """Answers "which of x and y does participant v prefer?"."""

    def winner(self, participant: ParticipantId, x: IdeaId, y: IdeaId) -> IdeaId: ...

    def comparable(self, x: IdeaId, y: IdeaId) -> Sequence[ParticipantId]:
        """Participants able to compare x and y."""
        ...


class IncomparablePairError(ValueError):
    def __init__(self, x: IdeaId, y: IdeaId) -> None:
        super().__init__(f"no participant can compare {x!r} and {y!r}")
        self.pair = (x, y)


@dataclass(frozen=True)
class SampleBudget:
    eps: float
    delta: float
    constant: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie strictly inside (0, 1), got {self.eps}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie strictly inside (0, 1), got {self.delta}")
        if not self.constant > 0.0:
            raise ValueError(f"constant must be positive, got {self.constant}")


def suggested_samples(m: int, budget: SampleBudget) -> int:
    """ceil(constant * m / eps^2 * ln(m / delta))."""
    if m < 2:
        raise ValueError(f"need at least 2 ideas, got {m}")
    return math.ceil(budget.constant * (m / budget.eps**2) * math.log(m / budget.delta))


def pair_queries_per_pair(m: int, budget: SampleBudget) -> int:
    """Voters sampled per pair by :func:`epsilon_condorcet_search`."""
    if m < 2:
        raise ValueError(f"need at least 2 ideas, got {m}")
    return math.ceil(budget.constant * math.log(m * m / budget.delta) / budget.eps**2)


def sample_pairs(m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` unordered pairs of distinct indices uniformly; shape (size, 2), row[0] < row[1]."""
    pairs = np.array(list(combinations(range(m), 2)), dtype=np.int64)
    return pairs[rng.integers(0, len(pairs), size=size)]


def _eligible(
    oracle: ComparisonOracle,
    ideas: Sequence[IdeaId],
    participants: Iterable[ParticipantId],
) -> tuple[list[tuple[int, int]], list[tuple[ParticipantId, ...]]]:
    pool = set(participants)
    pairs = list(combinations(range(len(ideas)), 2))
    eligible = []
    for i, j in pairs:
        voters = tuple(sorted(v for v in oracle.comparable(ideas[i], ideas[j]) if v in pool))
        if not voters:
            raise IncomparablePairError(ideas[i], ideas[j])
        eligible.append(voters)
    return pairs, eligible


def _sorted_ideas(ideas: Iterable[IdeaId]) -> list[IdeaId]:
    ordered = sorted(set(ideas))
    if len(ordered) < 2:
        raise ValueError(f"need at least 2 ideas, got {len(ordered)}")
    return ordered


def algorithm1(
    oracle: ComparisonOracle,
    ideas: Iterable[IdeaId],
    participants: Iterable[ParticipantId],
    n_samples: int,
    seed: int,
) -> tuple[ScoreVector, Ranking]:
    """Estimate the Borda ranking from ``n_samples`` random pairwise questions.

    Each step draws an unordered pair of distinct ideas uniformly, then a
    participant uniformly among those who can compare that pair, and
    credits the idea that participant prefers.

    Returns:
        The win counter per idea (summing to ``n_samples``) and the ideas
        ordered by descending count, ties by ascending id.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    order = _sorted_ideas(ideas)
    pairs, eligible = _eligible(oracle, order, participants)

    rng = make_rng(seed)
    pair_draws = rng.integers(0, len(pairs), size=n_samples)
    sizes = np.array([len(e) for e in eligible], dtype=np.int64)
    voter_draws = rng.integers(0, sizes[pair_draws])

    counts = [0] * len(order)
    for k, pick in zip(pair_draws.tolist(), voter_draws.tolist()):
        i, j = pairs[k]
        x = order[i]
        if oracle.winner(eligible[k][pick], x, order[j]) == x:
            counts[i] += 1
        else:
            counts[j] += 1

    scores = dict(zip(order, counts))
    return scores, borda_ranking(scores)


@dataclass(frozen=True)
class CondorcetSearch:
    winner: IdeaId | None
    tally: PairwiseTally
    per_pair: int
    queries: int


def condorcet_search_details(
    oracle: ComparisonOracle,
    ideas: Iterable[IdeaId],
    participants: Iterable[ParticipantId],
    budget: SampleBudget,
    seed: int,
) -> CondorcetSearch:
    """Like :func:`epsilon_condorcet_search` but also returns the sampled tally."""
    order = _sorted_ideas(ideas)
    m = len(order)
    pairs, eligible = _eligible(oracle, order, participants)
    t = pair_queries_per_pair(m, budget)

    rng = make_rng(seed)
    wins = np.zeros((m, m), dtype=np.int64)
    for (i, j), voters in zip(pairs, eligible):
        x, y = order[i], order[j]
        picks = rng.integers(0, len(voters), size=t)
        x_wins = sum(1 for p in picks.tolist() if oracle.winner(voters[p], x, y) == x)
        wins[i, j] = x_wins
        wins[j, i] = t - x_wins
    tally = PairwiseTally(tuple(order), wins, t)

    need = (1.0 - budget.eps) * (m - 1)
    best: tuple[int, int] | None = None
    winner = None
    for i, x in enumerate(order):
        rivals = epsilon_condorcet_rivals(x, tally, budget.eps)
        if rivals < need:
            continue
        key = (rivals, int(wins[i].sum()))
        if best is None or key > best:
            best, winner = key, x
    return CondorcetSearch(winner, tally, t, len(pairs) * t)


def epsilon_condorcet_search(
    oracle: ComparisonOracle,
    ideas: Iterable[IdeaId],
    participants: Iterable[ParticipantId],
    budget: SampleBudget,
    seed: int,
) -> IdeaId | None:
    """Look for an eps-Condorcet winner by sampling every pair.

    For every unordered pair, t = ceil(C * ln(m^2 / delta) / eps^2)
    comparable voters are drawn with replacement. An idea qualifies when
    its sampled record passes the eps-Condorcet test with t as the voter
    count. Among qualifying ideas the one beating the threshold against
    the most rivals wins, then the one with most sampled wins, then the
    smallest id. Returns None when nothing qualifies.
    """
    return condorcet_search_details(oracle, ideas, participants, budget, seed).winner
