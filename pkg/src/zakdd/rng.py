"""Deterministic random-number substreams.

All randomness in the package flows through NumPy's PCG64 generator, keyed by
a 64-bit user seed plus a tuple of task indices via SeedSequence spawn keys.
The same (seed, task indices) always yields the same stream, independent of
how many other substreams exist or in which order they are consumed, which is
what makes parallel sweeps reproducible cell by cell.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream"]


def substream(seed: int, *task_index: int) -> np.random.Generator:
    """Generator for one task cell: PCG64(SeedSequence(seed, spawn_key=task_index))."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in task_index))
    return np.random.Generator(np.random.PCG64(ss))
