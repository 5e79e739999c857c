"""Synthetic preference profiles and a profile-backed comparison oracle."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .model import IdeaId, ParticipantId, PreferenceProfile, Ranking, profile_from_rankings
from .rng import make_rng


class IncomparableError(LookupError):
    """The participant did not rank both ideas."""


def idea_ids(m: int) -> tuple[IdeaId, ...]:
    width = len(str(m))
    return tuple(f"i{j:0{width}d}" for j in range(1, m + 1))


def participant_ids(n: int) -> tuple[ParticipantId, ...]:
    width = len(str(n))
    return tuple(f"v{j:0{width}d}" for j in range(1, n + 1))


def _check_sizes(m: int, n: int) -> None:
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")


def gen_impartial_culture(m: int, n: int, seed: int) -> PreferenceProfile:
    """Every voter ranks the m ideas by an independent uniform permutation."""
    _check_sizes(m, n)
    ideas = idea_ids(m)
    rng = make_rng(seed)
    perms = np.argsort(rng.random((n, m)), axis=1)
    rankings = {v: tuple(ideas[k] for k in row) for v, row in zip(participant_ids(n), perms.tolist())}
    return profile_from_rankings(rankings, ideas)


@dataclass(frozen=True)
class MallowsParams:
    phi: float
    reference: Ranking

    def __post_init__(self) -> None:
        if not 0.0 < self.phi <= 1.0:
            raise ValueError(f"phi must lie in (0, 1], got {self.phi}")
        if len(set(self.reference)) != len(self.reference):
            raise ValueError("reference ranking has duplicate ideas")
        object.__setattr__(self, "reference", tuple(self.reference))


def _insertion_cdfs(m: int, phi: float) -> list[np.ndarray]:
    # Repeated insertion: the i-th reference item lands at slot j with
    # weight phi^(i - j), i.e. each slot it jumps ahead costs one inversion.
    cdfs = []
    for i in range(m):
        weights = phi ** np.arange(i, -1, -1, dtype=float)
        cdf = np.cumsum(weights / weights.sum())
        cdf[-1] = 1.0
        cdfs.append(cdf)
    return cdfs


def _mallows_one(
    reference: Sequence[IdeaId], cdfs: list[np.ndarray], rng: np.random.Generator
) -> Ranking:
    out: list[IdeaId] = []
    for idea, cdf, u in zip(reference, cdfs, rng.random(len(reference)).tolist()):
        out.insert(int(np.searchsorted(cdf, u, side="right")), idea)
    return tuple(out)


def gen_mallows(m: int, n: int, params: MallowsParams, seed: int) -> PreferenceProfile:
    """Voters drawn i.i.d. with P(r) proportional to phi ** kendall_tau(r, reference)."""
    _check_sizes(m, n)
    if len(params.reference) != m:
        raise ValueError(f"reference must rank all {m} ideas, got {len(params.reference)}")
    rng = make_rng(seed)
    cdfs = _insertion_cdfs(m, params.phi)
    rankings = {v: _mallows_one(params.reference, cdfs, rng) for v in participant_ids(n)}
    return profile_from_rankings(rankings, sorted(params.reference))


def kendall_tau_distance(a: Sequence[IdeaId], b: Sequence[IdeaId]) -> int:
    """Number of pairs ordered differently by two rankings of the same ideas."""
    pos = {x: i for i, x in enumerate(b)}
    seq = [pos[x] for x in a]
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


class ProfileOracle:
    """Answers comparison queries from stored rankings."""

    def __init__(self, profile: PreferenceProfile) -> None:
        self.profile = profile
        self._rank = {
            v: {x: r for r, x in enumerate(ranking)} for v, ranking in profile.rankings.items()
        }
        self._comparable: dict[frozenset[IdeaId], tuple[ParticipantId, ...]] = {}

    def winner(self, participant: ParticipantId, x: IdeaId, y: IdeaId) -> IdeaId:
        if x == y:
            raise ValueError(f"cannot compare idea {x!r} with itself")
        try:
            ranks = self._rank[participant]
        except KeyError:
            raise IncomparableError(f"unknown participant {participant!r}") from None
        try:
            return x if ranks[x] < ranks[y] else y
        except KeyError:
            raise IncomparableError(f"participant {participant!r} did not rank both {x!r} and {y!r}") from None

    def comparable(self, x: IdeaId, y: IdeaId) -> tuple[ParticipantId, ...]:
        key = frozenset((x, y))
        if key not in self._comparable:
            self._comparable[key] = tuple(
                v for v, ranks in self._rank.items() if x in ranks and y in ranks
            )
        return self._comparable[key]


def oracle_from_profile(profile: PreferenceProfile) -> ProfileOracle:
    return ProfileOracle(profile)


def gen_rating_sessions(
    transition: Sequence[Sequence[float]],
    participants: int,
    per_participant: int,
    seed: int,
    start: Sequence[float] | None = None,
):
    """Star ratings drawn from a first-order Markov chain over 1..5 stars.

    ``transition[p-1][q-1]`` is P(next = q | previous = p). Each participant
    starts from ``start`` (uniform by default) and rates ``per_participant``
    times. Events come back interleaved across participants by round.
    """
    from .behavior import RatingEvent

    matrix = np.asarray(transition, dtype=float)
    if matrix.shape != (5, 5) or not np.allclose(matrix.sum(axis=1), 1.0):
        raise ValueError("transition must be a 5x5 row-stochastic matrix")
    init = np.full(5, 0.2) if start is None else np.asarray(start, dtype=float)
    cdf = np.cumsum(matrix, axis=1)
    cdf[:, -1] = 1.0
    init_cdf = np.cumsum(init)
    init_cdf[-1] = 1.0

    rng = make_rng(seed)
    u = rng.random((per_participant, participants))
    state = np.searchsorted(init_cdf, u[0], side="right")
    rows = [state]
    for step in range(1, per_participant):
        state = (u[step][:, None] >= cdf[state]).sum(axis=1)
        rows.append(state)
    ids = participant_ids(participants)
    return [
        RatingEvent(ids[j], step, int(rows[step][j]) + 1)
        for step in range(per_participant)
        for j in range(participants)
    ]
