"""Domain types shared by the whole package.

Ideas and participants are plain strings. Rankings are tuples of idea ids,
best first. Everything here is immutable once built.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

IdeaId = str
ParticipantId = str
Ranking = tuple[IdeaId, ...]


@dataclass(frozen=True)
class PreferenceProfile:
    """A population of strict rankings over a fixed set of ideas.

    Rankings may be partial: a participant who ranked only some ideas can
    only be asked about pairs that are both in their ranking.

    Construction does not validate; call :func:`validate_profile` (parsers
    and generators in this package always do).
    """

    ideas: tuple[IdeaId, ...]
    rankings: Mapping[ParticipantId, Ranking]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ideas", tuple(self.ideas))
        frozen = {str(p): tuple(r) for p, r in self.rankings.items()}
        object.__setattr__(self, "rankings", MappingProxyType(frozen))

    @property
    def m(self) -> int:
        return len(self.ideas)

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def participants(self) -> tuple[ParticipantId, ...]:
        return tuple(self.rankings)

    @property
    def is_complete(self) -> bool:
        """True when every participant ranked every idea."""
        universe = set(self.ideas)
        return all(
            len(r) == len(universe) and set(r) == universe for r in self.rankings.values()
        )


@dataclass(frozen=True)
class ComparisonRecord:
    participant: ParticipantId
    winner: IdeaId
    loser: IdeaId
    elapsed_ms: int | None = None

    def __post_init__(self) -> None:
        if self.winner == self.loser:
            raise ValueError(f"winner and loser must differ, got {self.winner!r} twice")
        if self.elapsed_ms is not None and self.elapsed_ms < 0:
            raise ValueError(f"elapsed_ms must be non-negative, got {self.elapsed_ms}")


@dataclass(frozen=True)
class ComparisonLog:
    """Recorded pairwise outcomes for one topic, in collection order."""

    topic: str
    records: tuple[ComparisonRecord, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def ideas(self) -> tuple[IdeaId, ...]:
        """Every idea that appears in the log, sorted."""
        seen: set[IdeaId] = set()
        for rec in self.records:
            seen.add(rec.winner)
            seen.add(rec.loser)
        return tuple(sorted(seen))

    def participants(self) -> tuple[ParticipantId, ...]:
        return tuple(sorted({rec.participant for rec in self.records}))


@dataclass(frozen=True)
class Violation:
    participant: ParticipantId | None
    rule: str
    detail: str

    def __str__(self) -> str:
        where = f"participant {self.participant!r}: " if self.participant is not None else ""
        return f"{where}{self.rule}: {self.detail}"


def expand_ranking_to_comparisons(
    ranking: Sequence[IdeaId], participant: ParticipantId
) -> list[ComparisonRecord]:
    """Turn one strict ranking into its k(k-1)/2 pairwise preferences.

    Records come out in position order: (0,1), (0,2), ..., (1,2), ...
    """
    k = len(ranking)
    if k < 2:
        raise ValueError(f"a ranking needs at least 2 ideas to yield a comparison, got {k}")
    if len(set(ranking)) != k:
        raise ValueError(f"ranking for {participant!r} contains duplicate ideas")
    return [
        ComparisonRecord(participant, ranking[i], ranking[j])
        for i in range(k)
        for j in range(i + 1, k)
    ]


def expand_profile(profile: PreferenceProfile, topic: str = "topic") -> ComparisonLog:
    """Expand every ranking of a profile into one comparison log.

    Participants are visited in profile order; rankings shorter than two
    ideas contribute nothing.
    """
    records: list[ComparisonRecord] = []
    for participant, ranking in profile.rankings.items():
        if len(ranking) >= 2:
            records.extend(expand_ranking_to_comparisons(ranking, participant))
    return ComparisonLog(topic, tuple(records))


def validate_profile(profile: PreferenceProfile) -> list[Violation]:
    """Check a profile against the type invariants. An empty list means valid."""
    report: list[Violation] = []
    if len(profile.ideas) != len(set(profile.ideas)):
        dupes = sorted({x for x in profile.ideas if profile.ideas.count(x) > 1})
        report.append(Violation(None, "duplicate idea", f"idea set repeats {dupes}"))
    if any(not x for x in profile.ideas):
        report.append(Violation(None, "empty id", "idea ids must be non-empty"))
    if len(set(profile.ideas)) < 2:
        report.append(Violation(None, "too few ideas", f"need m >= 2, got {len(set(profile.ideas))}"))
    if profile.n < 1:
        report.append(Violation(None, "no participants", "need n >= 1"))

    universe = set(profile.ideas)
    for participant, ranking in profile.rankings.items():
        if not participant:
            report.append(Violation(participant, "empty id", "participant ids must be non-empty"))
        if not ranking:
            report.append(Violation(participant, "empty ranking", "ranking has no ideas"))
            continue
        seen: set[IdeaId] = set()
        for idea in ranking:
            if idea in seen:
                report.append(Violation(participant, "duplicate idea", f"{idea!r} ranked twice"))
            seen.add(idea)
            if idea not in universe:
                report.append(Violation(participant, "unknown idea", f"{idea!r} is not in the idea set"))
    return report


def profile_from_rankings(
    rankings: Mapping[ParticipantId, Iterable[IdeaId]],
    ideas: Iterable[IdeaId] | None = None,
) -> PreferenceProfile:
    """Build and validate a profile; ideas default to the sorted union of all rankings."""
    rankings = {p: tuple(r) for p, r in rankings.items()}
    if ideas is None:
        ideas = sorted({x for r in rankings.values() for x in r})
    profile = PreferenceProfile(tuple(ideas), rankings)
    problems = validate_profile(profile)
    if problems:
        raise ValueError("invalid profile: " + "; ".join(map(str, problems)))
    return profile
