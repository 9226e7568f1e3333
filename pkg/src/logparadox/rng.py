"""Seeded, splittable random streams.

A stream is identified by a 64-bit master seed plus a path of non-negative
integers (sweep index, cell index, role...). Streams with different paths are
statistically independent, and adding new paths never disturbs existing ones.
"""

from __future__ import annotations

import os

import numpy as np

SEED_ENV = "LOGPARADOX_SEED"
DEFAULT_SEED = 20230117
_MASK = (1 << 64) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _MASK:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def seed_sequence(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(p) for p in path))


def make_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *path)))


def derive_seed(seed: int, *path: int) -> int:
    """A child 64-bit seed for the stream at ``path``."""
    return int(seed_sequence(seed, *path).generate_state(1, np.uint64)[0])


def resolve_seed(seed=None) -> int:
    """Explicit seed, else ``$LOGPARADOX_SEED``, else the package default."""
    if seed is not None:
        return check_seed(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return check_seed(int(env, 0))
    return DEFAULT_SEED
