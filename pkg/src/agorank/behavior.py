"""Analyzers for rating bias, Condorcet existence and k-wise ranking cost."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .model import IdeaId, ParticipantId
from .social_choice import PairwiseTally, condorcet_winner

STARS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class RatingEvent:
    participant: ParticipantId
    sequence_index: int
    stars: int

    def __post_init__(self) -> None:
        if self.stars not in STARS:
            raise ValueError(f"stars must be 1..5, got {self.stars}")
        if self.sequence_index < 0:
            raise ValueError(f"sequence_index must be non-negative, got {self.sequence_index}")


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """First-order star transitions.

    ``counts[p-1, q-1]`` is how often a rating of q stars directly followed
    p stars. Rows never observed have zero support and NaN probabilities.
    """

    counts: npt.NDArray[np.int64]

    @property
    def support(self) -> npt.NDArray[np.int64]:
        return self.counts.sum(axis=1)

    @property
    def probs(self) -> npt.NDArray[np.float64]:
        support = self.support
        out = np.full((5, 5), np.nan)
        seen = support > 0
        out[seen] = self.counts[seen] / support[seen, None]
        return out

    def prob(self, prev: int, nxt: int) -> float | None:
        """P(next = nxt | prev), or None when ``prev`` was never followed by anything."""
        if self.support[prev - 1] == 0:
            return None
        return float(self.counts[prev - 1, nxt - 1] / self.support[prev - 1])

    def empty_rows(self) -> tuple[int, ...]:
        return tuple(s for s in STARS if self.support[s - 1] == 0)


def rating_transition(events: Iterable[RatingEvent]) -> TransitionMatrix:
    """Count star transitions between each participant's consecutive ratings.

    Each participant's events are ordered by ``sequence_index``; transitions
    never cross from one participant to another.
    """
    sessions: dict[ParticipantId, list[RatingEvent]] = defaultdict(list)
    for ev in events:
        sessions[ev.participant].append(ev)

    counts = np.zeros((5, 5), dtype=np.int64)
    for participant, evs in sessions.items():
        evs.sort(key=lambda e: e.sequence_index)
        for prev, nxt in zip(evs, evs[1:]):
            if prev.sequence_index == nxt.sequence_index:
                raise ValueError(
                    f"participant {participant!r} has two ratings at index {prev.sequence_index}"
                )
            counts[prev.stars - 1, nxt.stars - 1] += 1
    return TransitionMatrix(counts)


@dataclass(frozen=True)
class ExistenceSummary:
    topics_total: int
    with_winner: int
    without_winner: int
    winners: tuple[IdeaId | None, ...]


def condorcet_existence_summary(topics: Sequence[PairwiseTally]) -> ExistenceSummary:
    winners = tuple(condorcet_winner(t) for t in topics)
    found = sum(w is not None for w in winners)
    return ExistenceSummary(len(winners), found, len(winners) - found, winners)


@dataclass(frozen=True)
class TimingRecord:
    group_size: int
    elapsed_ms: int
    participant: ParticipantId | None = None

    def __post_init__(self) -> None:
        if self.group_size < 2:
            raise ValueError(f"group_size must be at least 2, got {self.group_size}")
        if self.elapsed_ms <= 0:
            raise ValueError(f"elapsed_ms must be positive, got {self.elapsed_ms}")


def time_per_comparison(records: Iterable[TimingRecord]) -> dict[int, float]:
    """Mean seconds per effective comparison, keyed by group size.

    Ranking k proposals yields k(k-1)/2 effective comparisons.
    """
    per_size: dict[int, list[float]] = defaultdict(list)
    for rec in records:
        k = rec.group_size
        per_size[k].append(rec.elapsed_ms / 1000.0 / (k * (k - 1) // 2))
    if not per_size:
        raise ValueError("need at least one timing record")
    return {k: float(np.mean(v)) for k, v in sorted(per_size.items())}
