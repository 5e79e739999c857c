"""Replay a recorded comparison log as a stream of Borda samples.

Shuffling a log of randomly assigned comparisons turns it into a plausible
run of the sampling algorithm. We do that many times, track the achieved
epsilon against the full-log scores along a grid of prefix lengths, and
read off where the average curve first dips below a target. Crossing
points from topics of different sizes are then fitted with a line in m and
extrapolated to larger populations.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import ComparisonLog, IdeaId
from .rng import make_rng

DEFAULT_REPEATS = 100
DEFAULT_GRID_POINTS = 50


@dataclass(frozen=True)
class ConvergenceTrajectory:
    grid: tuple[int, ...]
    eps_mean: tuple[float, ...]
    eps_std: tuple[float, ...]
    repeats: int
    m: int
    seed: int


@dataclass(frozen=True)
class ThresholdPoint:
    m: int
    target_eps: float
    samples: float


@dataclass(frozen=True)
class LinearFit:
    a: float
    b: float
    r2: float
    points: tuple[ThresholdPoint, ...]

    def predict(self, m: float) -> float:
        return self.a * m + self.b


def default_grid(log_size: int, points: int = DEFAULT_GRID_POINTS) -> tuple[int, ...]:
    """Up to ``points`` log-spaced integers from 1 to ``log_size`` inclusive."""
    if log_size < 1:
        raise ValueError("log must hold at least one record")
    if points < 1:
        raise ValueError(f"grid needs at least one point, got {points}")
    raw = np.geomspace(1, log_size, num=points)
    grid = np.unique(np.rint(raw).astype(np.int64))
    grid[-1] = log_size
    return tuple(int(t) for t in grid)


def _achieved_eps_rows(counts: np.ndarray, totals: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """Achieved epsilon of every row of ``counts`` (one row per grid point)."""
    m = truth.shape[0]
    est = np.empty(counts.shape, dtype=float)
    nonzero = totals > 0
    est[nonzero] = counts[nonzero] / totals[nonzero, None]
    est[~nonzero] = 1.0 / m
    return m / 2 * np.abs(est - truth).max(axis=1)


def _one_repeat(
    winners: np.ndarray, grid: np.ndarray, truth: np.ndarray, seed: int, repeat: int
) -> np.ndarray:
    m = truth.shape[0]
    shuffled = winners[make_rng(seed, repeat).permutation(winners.shape[0])]
    counts = np.zeros((grid.shape[0], m), dtype=np.int64)
    running = np.zeros(m, dtype=np.int64)
    start = 0
    for g, t in enumerate(grid.tolist()):
        running += np.bincount(shuffled[start:t], minlength=m)
        counts[g] = running
        start = t
    return _achieved_eps_rows(counts, grid, truth)


def replay_trajectory(
    log: ComparisonLog,
    ideas: Iterable[IdeaId] | None = None,
    repeats: int = DEFAULT_REPEATS,
    grid: Sequence[int] | None = None,
    seed: int = 0,
    workers: int = 1,
) -> ConvergenceTrajectory:
    """Average achieved epsilon over ``repeats`` random orderings of ``log``.

    Ground truth is the normalized win count over the whole log. Repeat r
    shuffles with a stream keyed by (seed, r), so the result does not
    depend on ``workers``. Grid point 0 is allowed and scores the uniform
    estimate 1/m.

    Raises:
        ValueError: empty log, non-increasing grid, or a grid point past
            the end of the log.
    """
    n_records = len(log)
    if n_records == 0:
        raise ValueError("cannot replay an empty comparison log")
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    order = sorted(set(log.ideas() if ideas is None else ideas))
    idx = {x: i for i, x in enumerate(order)}
    try:
        winners = np.fromiter((idx[r.winner] for r in log.records), dtype=np.int64, count=n_records)
        for r in log.records:
            idx[r.loser]
    except KeyError as exc:
        raise ValueError(f"log mentions idea {exc.args[0]!r} outside the idea set") from None

    grid_arr = np.asarray(default_grid(n_records) if grid is None else tuple(grid), dtype=np.int64)
    if grid_arr.size == 0:
        raise ValueError("grid is empty")
    if np.any(np.diff(grid_arr) <= 0) or grid_arr[0] < 0:
        raise ValueError("grid must be strictly increasing and non-negative")
    if grid_arr[-1] > n_records:
        raise ValueError(f"grid point {int(grid_arr[-1])} exceeds log size {n_records}")

    full = np.bincount(winners, minlength=len(order))
    # Same division as the per-prefix estimates so the full prefix is exactly zero.
    truth = full / full.sum()

    per_repeat = np.empty((repeats, grid_arr.shape[0]), dtype=float)

    def run(r: int) -> None:
        per_repeat[r] = _one_repeat(winners, grid_arr, truth, seed, r)

    if workers <= 1:
        for r in range(repeats):
            run(r)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(repeats)))

    return ConvergenceTrajectory(
        grid=tuple(int(t) for t in grid_arr),
        eps_mean=tuple(float(v) for v in per_repeat.mean(axis=0)),
        eps_std=tuple(float(v) for v in per_repeat.std(axis=0)),
        repeats=repeats,
        m=len(order),
        seed=seed,
    )


def threshold_crossing(
    trajectory: ConvergenceTrajectory, target_eps: float, interpolate: bool = False
) -> float | None:
    """First grid point whose mean epsilon is at or below ``target_eps``.

    With ``interpolate`` the crossing is placed linearly between the last
    grid point above the target and the first one at or below it.
    """
    if target_eps <= 0:
        raise ValueError(f"target_eps must be positive, got {target_eps}")
    grid, means = trajectory.grid, trajectory.eps_mean
    for k, (t, e) in enumerate(zip(grid, means)):
        if e <= target_eps:
            if not interpolate or k == 0:
                return t
            t0, e0 = grid[k - 1], means[k - 1]
            return t0 + (e0 - target_eps) / (e0 - e) * (t - t0)
    return None


def fit_linear(points: Sequence[ThresholdPoint]) -> LinearFit:
    """Least-squares line samples = a * m + b."""
    if len({p.m for p in points}) < 2:
        raise ValueError("a linear fit needs points at two or more distinct m values")
    x = np.array([p.m for p in points], dtype=float)
    y = np.array([p.samples for p in points], dtype=float)
    xc = x - x.mean()
    a = float((xc * (y - y.mean())).sum() / (xc * xc).sum())
    b = float(y.mean() - a * x.mean())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    ss_res = float(((y - (a * x + b)) ** 2).sum())
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return LinearFit(a, b, r2, tuple(points))


def extrapolate_per_participant(fit: LinearFit | tuple[float, float], m: int, n: int) -> float:
    """Expected comparisons each of ``n`` participants makes for ``m`` ideas.

    ``fit`` may be a :class:`LinearFit` or a bare ``(a, b)`` pair.
    """
    a, b = (fit.a, fit.b) if isinstance(fit, LinearFit) else fit
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    total = a * m + b
    if total <= 0:
        raise ValueError(
            f"predicted total {total} is not positive; m={m} is outside the fitted regime"
        )
    return total / n
