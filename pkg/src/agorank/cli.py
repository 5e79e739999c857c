"""Command-line front end.

Exit status: 0 on success, 1 on a usage or validation error, 2 on an I/O
error. Every stochastic command takes ``--seed`` (default: $AGORANK_SEED,
else 0) and writes the seed it used into its output.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import IO, Any

from . import io as fmt
from .behavior import rating_transition, time_per_comparison
from .model import ComparisonLog, PreferenceProfile, expand_profile, validate_profile
from .replay import (
    DEFAULT_GRID_POINTS,
    DEFAULT_REPEATS,
    ThresholdPoint,
    default_grid,
    extrapolate_per_participant,
    fit_linear,
    replay_trajectory,
    threshold_crossing,
)
from .rng import default_seed, derive_seed
from .sampler import SampleBudget, algorithm1, condorcet_search_details, suggested_samples
from .social_choice import (
    achieved_epsilon,
    borda_ranking,
    borda_scores,
    borda_scores_from_comparisons,
    condorcet_winner,
    normalize,
    pairwise_tally,
)
from .synthetic import MallowsParams, gen_impartial_culture, gen_mallows, idea_ids, oracle_from_profile


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _open_in(path: str) -> IO[str]:
    return open(path, encoding="utf-8-sig", newline="")


def _load_profile(path: str) -> PreferenceProfile:
    with _open_in(path) as fh:
        return fmt.parse_profile_json(fh, path)


def _load_log(path: str, topic: str | None) -> ComparisonLog:
    with _open_in(path) as fh:
        return fmt.parse_comparisons_csv(fh, path, topic)


def _emit(args: argparse.Namespace, write: Callable[[IO[str]], None]) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write(fh)
    else:
        write(sys.stdout)


def _emit_json(args: argparse.Namespace, doc: Any) -> None:
    _emit(args, lambda fh: fh.write(fmt.dumps(doc)))


def _map_trials(fn: Callable[[int], Any], seeds: Sequence[int], workers: int) -> list[Any]:
    if workers <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))


def _trial_seeds(seed: int, trials: int) -> list[int]:
    if trials < 1:
        raise ValueError(f"--trials must be positive, got {trials}")
    return [seed] if trials == 1 else [derive_seed(seed, k) for k in range(trials)]


def cmd_tally(args: argparse.Namespace) -> int:
    if args.profile:
        profile = _load_profile(args.profile)
        if profile.is_complete:
            scores = borda_scores(profile)
        else:
            scores = borda_scores_from_comparisons(expand_profile(profile), profile.ideas)
        tally = pairwise_tally(profile)
        m, n = profile.m, profile.n
    else:
        log = _load_log(args.comparisons, args.topic)
        ideas = log.ideas()
        scores = borda_scores_from_comparisons(log, ideas)
        tally = pairwise_tally(log, ideas)
        m, n = len(ideas), tally.voters
    _emit_json(args, {
        "m": m,
        "n": n,
        "scores": scores,
        "normalized": normalize(scores),
        "ranking": list(borda_ranking(scores)),
        "condorcet_winner": condorcet_winner(tally),
    })
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    budget = SampleBudget(args.eps, args.delta, args.constant)
    n_samples = args.samples or suggested_samples(profile.m, budget)
    oracle = oracle_from_profile(profile)
    truth = normalize(borda_scores(profile)) if profile.is_complete else None

    def trial(seed: int) -> dict[str, Any]:
        counts, ranking = algorithm1(oracle, profile.ideas, profile.participants, n_samples, seed)
        out: dict[str, Any] = {"seed": seed, "counts": counts, "ranking": list(ranking)}
        if truth is not None:
            out["achieved_epsilon"] = achieved_epsilon(normalize(counts), truth)
        return out

    _emit_json(args, {
        "seed": args.seed,
        "eps": args.eps,
        "delta": args.delta,
        "constant": args.constant,
        "samples": n_samples,
        "trials": _map_trials(trial, _trial_seeds(args.seed, args.trials), args.workers),
    })
    return 0


def cmd_condorcet_search(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    budget = SampleBudget(args.eps, args.delta, args.constant)
    oracle = oracle_from_profile(profile)

    def trial(seed: int):
        return seed, condorcet_search_details(oracle, profile.ideas, profile.participants, budget, seed)

    results = _map_trials(trial, _trial_seeds(args.seed, args.trials), args.workers)
    _emit_json(args, {
        "seed": args.seed,
        "eps": args.eps,
        "delta": args.delta,
        "constant": args.constant,
        "per_pair": results[0][1].per_pair,
        "queries": results[0][1].queries,
        "trials": [{"seed": s, "winner": r.winner} for s, r in results],
    })
    return 0


def _parse_targets(raw: str) -> list[float]:
    try:
        targets = [float(t) for t in raw.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"--targets must be comma-separated numbers, got {raw!r}") from None
    if not targets or any(t <= 0 for t in targets):
        raise ValueError("--targets must list positive numbers")
    return targets


def cmd_replay(args: argparse.Namespace) -> int:
    log = _load_log(args.comparisons, args.topic)
    targets = _parse_targets(args.targets)
    grid = default_grid(len(log), args.grid_size)
    trajectory = replay_trajectory(log, None, args.repeats, grid, args.seed, args.workers)
    if args.output:
        _emit(args, lambda fh: fmt.write_trajectory_csv(trajectory, fh))

    points = []
    for target in targets:
        crossing = threshold_crossing(trajectory, target, interpolate=args.interpolate)
        if crossing is not None:
            points.append(ThresholdPoint(trajectory.m, target, crossing))
    summary = {
        "seed": args.seed,
        "topic": log.topic,
        "m": trajectory.m,
        "records": len(log),
        "repeats": args.repeats,
        "points": fmt.points_to_list(points),
        "unreached": [t for t in targets if t not in {p.target_eps for p in points}],
    }
    if args.crossings:
        Path(args.crossings).write_text(fmt.dumps(summary), encoding="utf-8")
    if args.output is None or args.crossings is None:
        sys.stdout.write(fmt.dumps(summary))
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    points: list[ThresholdPoint] = []
    seeds = set()
    for path in args.inputs:
        with _open_in(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise fmt.ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(doc, dict) or "points" not in doc:
            raise fmt.ParseError(path, 1, "expected an object with a 'points' array")
        points.extend(fmt.points_from_list(doc["points"], path))
        seeds.add(doc.get("seed"))
    if args.target is not None:
        points = [p for p in points if abs(p.target_eps - args.target) < 1e-12]
    fit = fit_linear(points)
    seed = seeds.pop() if len(seeds) == 1 else None
    _emit_json(args, fmt.fit_to_dict(fit, seed))
    return 0


def cmd_extrapolate(args: argparse.Namespace) -> int:
    if args.fit:
        with _open_in(args.fit) as fh:
            doc = json.load(fh)
        a, b = float(doc["a"]), float(doc["b"])
    elif args.a is None or args.b is None:
        raise UsageError("extrapolate: error: give --fit or both --a and --b")
    else:
        a, b = args.a, args.b
    value = extrapolate_per_participant((a, b), args.m, args.n)
    sys.stdout.write(f"{value!r}\n")
    return 0


def cmd_bias(args: argparse.Namespace) -> int:
    with _open_in(args.ratings) as fh:
        events = fmt.parse_ratings_csv(fh, args.ratings)
    matrix = rating_transition(events)
    _emit_json(args, {
        "counts": matrix.counts.tolist(),
        "support": matrix.support.tolist(),
        "probs": {
            str(p): None if matrix.prob(p, 1) is None else {str(q): matrix.prob(p, q) for q in range(1, 6)}
            for p in range(1, 6)
        },
    })
    return 0


def cmd_timing(args: argparse.Namespace) -> int:
    with _open_in(args.timings) as fh:
        records = fmt.parse_timings_csv(fh, args.timings)
    _emit_json(args, {str(k): v for k, v in time_per_comparison(records).items()})
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.model == "impartial":
        profile = gen_impartial_culture(args.m, args.n, args.seed)
    else:
        profile = gen_mallows(args.m, args.n, MallowsParams(args.phi, idea_ids(args.m)), args.seed)
    if args.format == "profile":
        _emit(args, lambda fh: fh.write(fmt.profile_to_json(profile, seed=args.seed)))
    else:
        log = expand_profile(profile, args.topic)
        _emit(args, lambda fh: fmt.write_comparisons_csv([log], fh))
    return 0


def cmd_expand(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    log = expand_profile(profile, args.topic)
    _emit(args, lambda fh: fmt.write_comparisons_csv([log], fh))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    if args.profile:
        profile = _load_profile(args.profile)
        problems = validate_profile(profile)
        detail = f"{profile.m} ideas, {profile.n} rankings, complete={profile.is_complete}"
        if problems:
            for p in problems:
                sys.stderr.write(f"{args.profile}: {p}\n")
            return 1
    elif args.comparisons:
        with _open_in(args.comparisons) as fh:
            logs = fmt.read_comparison_logs(fh, args.comparisons)
        detail = f"{len(logs)} topics, {sum(len(v) for v in logs.values())} records"
    elif args.ratings:
        with _open_in(args.ratings) as fh:
            detail = f"{len(fmt.parse_ratings_csv(fh, args.ratings))} ratings"
    else:
        with _open_in(args.timings) as fh:
            detail = f"{len(fmt.parse_timings_csv(fh, args.timings))} timing records"
    sys.stdout.write(f"ok: {detail}\n")
    return 0


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--constant", type=float, default=1.0, help="multiplier on the sample budget")


def _add_seed(p: argparse.ArgumentParser, workers: bool = True) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed (default: $AGORANK_SEED or 0)")
    if workers:
        p.add_argument("--workers", type=int, default=1, help="thread pool size; never changes results")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="agorank", description="Sampled elicitation of Borda and Condorcet outcomes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tally", help="exact Borda and Condorcet results")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile")
    src.add_argument("--comparisons")
    p.add_argument("--topic")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tally)

    p = sub.add_parser("sample", help="estimate the Borda ranking by random pairwise questions")
    p.add_argument("--profile", required=True)
    _add_budget(p)
    p.add_argument("--samples", type=int, default=None, help="override the suggested sample count")
    p.add_argument("--trials", type=int, default=1)
    _add_seed(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("condorcet-search", help="look for an eps-Condorcet winner by sampling")
    p.add_argument("--profile", required=True)
    _add_budget(p)
    p.add_argument("--trials", type=int, default=1)
    _add_seed(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_condorcet_search)

    p = sub.add_parser("replay", help="replay a comparison log and track the achieved eps")
    p.add_argument("--comparisons", required=True)
    p.add_argument("--topic")
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_POINTS)
    p.add_argument("--targets", default="0.05,0.1")
    p.add_argument("--interpolate", action="store_true", help="interpolate crossings between grid points")
    _add_seed(p)
    p.add_argument("-o", "--output", help="trajectory CSV")
    p.add_argument("--crossings", help="threshold crossings JSON")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("fit", help="fit samples = a*m + b through threshold crossings")
    p.add_argument("inputs", nargs="+", help="crossings JSON files written by replay")
    p.add_argument("--target", type=float, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("extrapolate", help="comparisons per participant from a linear fit")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--fit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("bias", help="star-rating transition frequencies")
    p.add_argument("--ratings", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("timing", help="seconds per effective comparison by group size")
    p.add_argument("--timings", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_timing)

    p = sub.add_parser("gen", help="generate a synthetic profile")
    p.add_argument("--model", choices=("impartial", "mallows"), default="impartial")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--format", choices=("profile", "comparisons"), default="profile")
    p.add_argument("--topic", default="synthetic")
    _add_seed(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("expand", help="expand a profile into a comparisons CSV")
    p.add_argument("--profile", required=True)
    p.add_argument("--topic", default="topic")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("validate", help="check an input file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile")
    src.add_argument("--comparisons")
    src.add_argument("--ratings")
    src.add_argument("--timings")
    p.set_defaults(func=cmd_validate)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"agorank: I/O error: {exc}\n")
        return 2
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"agorank: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
