"""Seeded random streams.

Every random draw in the package comes from a numpy ``Generator`` backed by
PCG64 and keyed by ``(seed, stream)`` through ``SeedSequence``. Distinct
stream ids give statistically independent generators for the same seed, so
parallel chains and posterior predictive draws never share state.
"""
from __future__ import annotations

import numpy as np

ALGORITHM = "PCG64"

# stream ids; chains use 0, 1, 2, ...
NOISE_STREAM = 0
PPC_STREAM = 2**31


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Fresh generator for ``seed`` on the given stream id."""
    if int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(seq))
