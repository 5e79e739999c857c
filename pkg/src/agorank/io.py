"""Readers and writers for the on-disk formats.

CSV files carry a fixed header row, are comma-delimited UTF-8 and may use
LF or CRLF line endings. Every parse error names the source, line and the
offending column.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Iterator, Mapping
from typing import IO, Any

from .behavior import RatingEvent, TimingRecord
from .model import ComparisonLog, ComparisonRecord, PreferenceProfile, validate_profile
from .replay import ConvergenceTrajectory, LinearFit, ThresholdPoint

COMPARISONS_HEADER = ("topic_id", "participant_id", "winner", "loser", "elapsed_ms")
RATINGS_HEADER = ("participant_id", "sequence_index", "stars")
TIMINGS_HEADER = ("participant_id", "group_size", "elapsed_ms")
TRAJECTORY_HEADER = ("samples", "eps_mean", "eps_std")


class ParseError(ValueError):
    def __init__(self, source: str, line: int | None, rule: str, column: str | None = None) -> None:
        self.source = source
        self.line = line
        self.column = column
        self.rule = rule
        where = source if line is None else f"{source}:{line}"
        col = f" column {column!r}" if column else ""
        super().__init__(f"{where}:{col} {rule}")


def _source_name(stream: IO[str], source: str | None) -> str:
    return source or getattr(stream, "name", None) or "<stream>"


def _rows(stream: IO[str], source: str, header: tuple[str, ...]) -> Iterator[tuple[int, dict[str, str]]]:
    reader = csv.reader(stream)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(source, 1, f"missing header row {','.join(header)}") from None
    if first and first[0].startswith("﻿"):
        first[0] = first[0][1:]
    if tuple(first) != header:
        raise ParseError(source, reader.line_num, f"expected header {','.join(header)}, got {','.join(first)}")
    for row in reader:
        line = reader.line_num
        if not row:
            raise ParseError(source, line, "blank row")
        if len(row) != len(header):
            raise ParseError(source, line, f"expected {len(header)} fields, got {len(row)}")
        yield line, dict(zip(header, row))


def _nonempty(value: str, source: str, line: int, column: str) -> str:
    if value == "":
        raise ParseError(source, line, "value must be non-empty", column)
    return value


def _int(value: str, source: str, line: int, column: str, minimum: int | None = None) -> int:
    try:
        out = int(value)
    except ValueError:
        raise ParseError(source, line, f"expected an integer, got {value!r}", column) from None
    if minimum is not None and out < minimum:
        raise ParseError(source, line, f"must be >= {minimum}, got {out}", column)
    return out


def read_comparison_logs(stream: IO[str], source: str | None = None) -> dict[str, ComparisonLog]:
    """All topics in a comparisons CSV, in order of first appearance."""
    name = _source_name(stream, source)
    grouped: dict[str, list[ComparisonRecord]] = {}
    for line, row in _rows(stream, name, COMPARISONS_HEADER):
        topic = _nonempty(row["topic_id"], name, line, "topic_id")
        participant = _nonempty(row["participant_id"], name, line, "participant_id")
        winner = _nonempty(row["winner"], name, line, "winner")
        loser = _nonempty(row["loser"], name, line, "loser")
        if winner == loser:
            raise ParseError(name, line, "winner and loser must differ", "loser")
        elapsed = row["elapsed_ms"]
        ms = None if elapsed == "" else _int(elapsed, name, line, "elapsed_ms", minimum=0)
        grouped.setdefault(topic, []).append(ComparisonRecord(participant, winner, loser, ms))
    return {t: ComparisonLog(t, tuple(recs)) for t, recs in grouped.items()}


def parse_comparisons_csv(
    stream: IO[str], source: str | None = None, topic: str | None = None
) -> ComparisonLog:
    """Read one topic's log. With several topics in the file, ``topic`` must pick one."""
    name = _source_name(stream, source)
    logs = read_comparison_logs(stream, name)
    if topic is not None:
        if topic not in logs:
            raise ParseError(name, None, f"topic {topic!r} not found")
        return logs[topic]
    if not logs:
        raise ParseError(name, None, "no comparison rows")
    if len(logs) > 1:
        raise ParseError(name, None, f"file holds {len(logs)} topics; choose one of {sorted(logs)}")
    return next(iter(logs.values()))


def write_comparisons_csv(logs: Iterable[ComparisonLog], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COMPARISONS_HEADER)
    for log in logs:
        for rec in log.records:
            ms = "" if rec.elapsed_ms is None else str(rec.elapsed_ms)
            writer.writerow((log.topic, rec.participant, rec.winner, rec.loser, ms))


def _line_of(text: str, needle: str) -> int | None:
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def parse_profile_json(stream: IO[str], source: str | None = None) -> PreferenceProfile:
    """Read ``{"ideas": [...], "rankings": {participant: [best, ..., worst]}}``.

    An optional integer ``"seed"`` key is accepted and ignored.
    """
    name = _source_name(stream, source)
    text = stream.read()

    def no_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key, value in pairs:
            if key in out:
                rule = (
                    f"duplicate ranking for participant {key!r}"
                    if isinstance(value, list)
                    else f"duplicate key {key!r}"
                )
                raise ParseError(name, _line_of(text, json.dumps(key) + ":"), rule)
            out[key] = value
        return out

    try:
        doc = json.loads(text, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(name, exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(name, 1, "profile must be a JSON object")
    for key in ("ideas", "rankings"):
        if key not in doc:
            raise ParseError(name, 1, f"missing key {key!r}")

    ideas = doc["ideas"]
    ideas_line = _line_of(text, '"ideas"')
    if not isinstance(ideas, list) or not all(isinstance(x, str) and x for x in ideas):
        raise ParseError(name, ideas_line, "'ideas' must be an array of non-empty strings")
    if len(set(ideas)) != len(ideas):
        raise ParseError(name, ideas_line, "'ideas' repeats an id")

    rankings = doc["rankings"]
    if not isinstance(rankings, dict):
        raise ParseError(name, _line_of(text, '"rankings"'), "'rankings' must be an object")
    for participant, ranking in rankings.items():
        line = _line_of(text, json.dumps(participant) + ":")
        if not isinstance(ranking, list):
            raise ParseError(name, line, f"ranking for {participant!r} must be an array")
        for entry in ranking:
            if isinstance(entry, list):
                raise ParseError(name, line, f"ranking for {participant!r} has a tie; rankings must be strict")
            if not isinstance(entry, str):
                raise ParseError(name, line, f"ranking for {participant!r} holds non-string {entry!r}")

    profile = PreferenceProfile(tuple(ideas), rankings)
    problems = validate_profile(profile)
    if problems:
        first = problems[0]
        line = _line_of(text, json.dumps(first.participant) + ":") if first.participant else 1
        raise ParseError(name, line, str(first))
    return profile


def profile_to_dict(profile: PreferenceProfile, seed: int | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "ideas": list(profile.ideas),
        "rankings": {p: list(r) for p, r in profile.rankings.items()},
    }
    if seed is not None:
        doc["seed"] = seed
    return doc


def profile_to_json(profile: PreferenceProfile, seed: int | None = None) -> str:
    return json.dumps(profile_to_dict(profile, seed), indent=2) + "\n"


def parse_ratings_csv(stream: IO[str], source: str | None = None) -> list[RatingEvent]:
    name = _source_name(stream, source)
    events = []
    last: dict[str, int] = {}
    for line, row in _rows(stream, name, RATINGS_HEADER):
        participant = _nonempty(row["participant_id"], name, line, "participant_id")
        index = _int(row["sequence_index"], name, line, "sequence_index", minimum=0)
        stars = _int(row["stars"], name, line, "stars")
        if not 1 <= stars <= 5:
            raise ParseError(name, line, f"stars must be 1..5, got {stars}", "stars")
        if participant in last and index <= last[participant]:
            raise ParseError(
                name, line,
                f"sequence_index must increase per participant ({index} after {last[participant]})",
                "sequence_index",
            )
        last[participant] = index
        events.append(RatingEvent(participant, index, stars))
    return events


def write_ratings_csv(events: Iterable[RatingEvent], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RATINGS_HEADER)
    for ev in events:
        writer.writerow((ev.participant, ev.sequence_index, ev.stars))


def parse_timings_csv(stream: IO[str], source: str | None = None) -> list[TimingRecord]:
    name = _source_name(stream, source)
    records = []
    for line, row in _rows(stream, name, TIMINGS_HEADER):
        participant = _nonempty(row["participant_id"], name, line, "participant_id")
        k = _int(row["group_size"], name, line, "group_size", minimum=2)
        ms = _int(row["elapsed_ms"], name, line, "elapsed_ms", minimum=1)
        records.append(TimingRecord(k, ms, participant))
    return records


def write_timings_csv(records: Iterable[TimingRecord], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TIMINGS_HEADER)
    for rec in records:
        writer.writerow((rec.participant or "", rec.group_size, rec.elapsed_ms))


def write_trajectory_csv(trajectory: ConvergenceTrajectory, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for row in zip(trajectory.grid, trajectory.eps_mean, trajectory.eps_std):
        writer.writerow((row[0], repr(row[1]), repr(row[2])))


def parse_trajectory_csv(stream: IO[str], source: str | None = None) -> list[tuple[int, float, float]]:
    name = _source_name(stream, source)
    out = []
    for line, row in _rows(stream, name, TRAJECTORY_HEADER):
        t = _int(row["samples"], name, line, "samples", minimum=0)
        try:
            mean, std = float(row["eps_mean"]), float(row["eps_std"])
        except ValueError:
            raise ParseError(name, line, "expected real numbers") from None
        out.append((t, mean, std))
    return out


def points_to_list(points: Iterable[ThresholdPoint]) -> list[dict[str, Any]]:
    return [{"m": p.m, "target_eps": p.target_eps, "samples": p.samples} for p in points]


def points_from_list(items: Iterable[Mapping[str, Any]], source: str = "<points>") -> list[ThresholdPoint]:
    out = []
    for k, item in enumerate(items):
        try:
            out.append(ThresholdPoint(int(item["m"]), float(item["target_eps"]), item["samples"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(source, None, f"point #{k} is malformed: {exc}") from None
    return out


def fit_to_dict(fit: LinearFit, seed: int | None) -> dict[str, Any]:
    return {"a": fit.a, "b": fit.b, "r2": fit.r2, "points": points_to_list(fit.points), "seed": seed}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def read_text(text: str) -> IO[str]:
    return io.StringIO(text, newline="")
