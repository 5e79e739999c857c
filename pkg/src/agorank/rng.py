"""Seeded random streams.

All randomness goes through numpy's PCG64 generator seeded from a
``SeedSequence``. Child streams are keyed by (master seed, index), so a
trial's draws do not depend on which worker runs it or in what order.
"""

from __future__ import annotations

import os

import numpy as np

SEED_ENV = "AGORANK_SEED"
DEFAULT_SEED = 0


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    if seed < 0 or any(k < 0 for k in keys):
        raise ValueError(f"seeds must be non-negative integers, got {(seed, *keys)}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def derive_seed(seed: int, index: int) -> int:
    """A 63-bit child seed for stream ``index`` under ``seed``."""
    state = np.random.SeedSequence([seed, index]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
