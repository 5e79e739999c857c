"""Exact Borda and Condorcet computation and their epsilon-relaxations.

Scores stay integral until :func:`normalize`. Ties are always broken by
ascending idea id so every output is reproducible.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .model import ComparisonLog, IdeaId, PreferenceProfile, Ranking

ScoreVector = dict[IdeaId, int]
NormalizedScoreVector = dict[IdeaId, float]

SUM_TOLERANCE = 1e-9


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")


def borda_scores(profile: PreferenceProfile) -> ScoreVector:
    """Borda points: an idea ranked r-th (1-based) by a voter earns m - r."""
    if not profile.is_complete:
        raise ValueError(
            "exact Borda scores need a complete profile; "
            "use borda_scores_from_comparisons for partial data"
        )
    m = profile.m
    scores = {x: 0 for x in profile.ideas}
    for ranking in profile.rankings.values():
        for position, idea in enumerate(ranking, start=1):
            scores[idea] += m - position
    return scores


def borda_scores_from_comparisons(log: ComparisonLog, ideas: Iterable[IdeaId]) -> ScoreVector:
    """Count, for every idea, the records it won."""
    if not log.records:
        raise ValueError("cannot score an empty comparison log")
    scores = {x: 0 for x in ideas}
    for rec in log.records:
        if rec.winner not in scores or rec.loser not in scores:
            unknown = rec.winner if rec.winner not in scores else rec.loser
            raise ValueError(f"record mentions unknown idea {unknown!r}")
        scores[rec.winner] += 1
    return scores


def normalize(scores: Mapping[IdeaId, float]) -> NormalizedScoreVector:
    total = sum(scores.values())
    if total <= 0:
        raise ValueError("cannot normalize a score vector whose total is not positive")
    return {x: s / total for x, s in scores.items()}


def borda_ranking(scores: Mapping[IdeaId, float]) -> Ranking:
    """Order ideas by descending score, ties by ascending id."""
    return tuple(sorted(scores, key=lambda x: (-scores[x], x)))


def is_epsilon_borda_winner(x: IdeaId, scores: Mapping[IdeaId, float], eps: float) -> bool:
    _check_eps(eps)
    if x not in scores:
        raise KeyError(x)
    return scores[x] >= (1.0 - eps) * max(scores.values())


def achieved_epsilon(
    estimate: Mapping[IdeaId, float], truth: Mapping[IdeaId, float]
) -> float:
    """Smallest eps for which ``estimate`` certifies an eps-Borda ranking.

    A normalized estimate within 2*eps/m of the truth on every idea
    certifies eps, so the answer is (m/2) times the worst deviation.
    """
    if set(estimate) != set(truth):
        raise ValueError("estimate and truth must cover the same ideas")
    m = len(truth)
    worst = max(abs(estimate[x] - truth[x]) for x in truth)
    return m / 2 * worst


@dataclass(frozen=True, eq=False)
class PairwiseTally:
    """Head-to-head counts: ``wins[i, j]`` voters (or records) put ideas[i] over ideas[j]."""

    ideas: tuple[IdeaId, ...]
    wins: npt.NDArray[np.int64]
    voters: int

    def __post_init__(self) -> None:
        wins = np.asarray(self.wins)
        m = len(self.ideas)
        if wins.shape != (m, m):
            raise ValueError(f"wins must be {m}x{m}, got {wins.shape}")
        wins = wins.copy()
        wins.setflags(write=False)
        object.__setattr__(self, "ideas", tuple(self.ideas))
        object.__setattr__(self, "wins", wins)

    def index(self, x: IdeaId) -> int:
        return self.ideas.index(x)

    def __getitem__(self, pair: tuple[IdeaId, IdeaId]) -> int:
        x, y = pair
        return int(self.wins[self.index(x), self.index(y)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairwiseTally):
            return NotImplemented
        return (
            self.ideas == other.ideas
            and self.voters == other.voters
            and np.array_equal(self.wins, other.wins)
        )

    @property
    def m(self) -> int:
        return len(self.ideas)


def pairwise_tally(
    source: PreferenceProfile | ComparisonLog, ideas: Iterable[IdeaId] | None = None
) -> PairwiseTally:
    """Head-to-head counts from a profile or a comparison log.

    For a log the voter count is the number of distinct participants and
    ``ideas`` defaults to every idea seen in the log.
    """
    if isinstance(source, PreferenceProfile):
        order = tuple(source.ideas if ideas is None else ideas)
        idx = {x: i for i, x in enumerate(order)}
        wins = np.zeros((len(order), len(order)), dtype=np.int64)
        for ranking in source.rankings.values():
            pos = [idx[x] for x in ranking]
            for a in range(len(pos)):
                for b in range(a + 1, len(pos)):
                    wins[pos[a], pos[b]] += 1
        return PairwiseTally(order, wins, source.n)

    order = tuple(source.ideas() if ideas is None else ideas)
    idx = {x: i for i, x in enumerate(order)}
    wins = np.zeros((len(order), len(order)), dtype=np.int64)
    for rec in source.records:
        wins[idx[rec.winner], idx[rec.loser]] += 1
    return PairwiseTally(order, wins, len(source.participants()))


def condorcet_winner(tally: PairwiseTally) -> IdeaId | None:
    """The idea with a strict head-to-head majority over every rival, if any."""
    w = tally.wins
    for i, x in enumerate(tally.ideas):
        if all(w[i, j] > w[j, i] for j in range(tally.m) if j != i):
            return x
    return None


def epsilon_condorcet_rivals(
    x: IdeaId, tally: PairwiseTally, eps: float, vote_base: float | None = None
) -> int:
    """Number of rivals against which ``x`` collects at least (1 - eps) * vote_base / 2 votes.

    ``vote_base`` defaults to the tally's voter count.
    """
    _check_eps(eps)
    base = tally.voters if vote_base is None else vote_base
    need = (1.0 - eps) * base / 2
    i = tally.index(x)
    return sum(1 for j in range(tally.m) if j != i and tally.wins[i, j] >= need)


def is_epsilon_condorcet_winner(
    x: IdeaId, tally: PairwiseTally, eps: float, vote_base: float | None = None
) -> bool:
    """Near-majority support against nearly every rival.

    The vote threshold is (1 - eps) times half of ``vote_base``, which is
    the number of voters unless overridden. Pass ``vote_base=tally.m`` to
    use the idea count instead.
    """
    qualifying = epsilon_condorcet_rivals(x, tally, eps, vote_base)
    return qualifying >= (1.0 - eps) * (tally.m - 1)
