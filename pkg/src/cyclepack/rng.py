"""Seeded random streams.

Every random choice in the package draws from a numpy ``Generator`` backed by
PCG64.  A run is driven by one integer seed; each pipeline phase gets its own
substream keyed by the CRC32 of the phase name::

    SeedSequence(seed, spawn_key=(crc32(phase),))

so adding, removing or reordering phases never shifts another phase's draws.
"""

from __future__ import annotations

import zlib

import numpy as np

SeedLike = "int | np.random.Generator | None"


def substream(seed: int, phase: str) -> np.random.Generator:
    key = zlib.crc32(phase.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(key,))))


def as_generator(seed, phase: str = "default") -> np.random.Generator:
    """Accept an int seed or an existing Generator (returned unchanged)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    return substream(seed, phase)


def child(rng: np.random.Generator, label: str) -> np.random.Generator:
    """Derive an independent generator from ``rng`` for a named sub-task."""
    base = int(rng.integers(0, 2**63))
    return substream(base, label)
