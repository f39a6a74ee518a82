"""Seed handling and random streams.

All randomness flows through counter-based Philox generators keyed by 64-bit
seeds, so a (master seed, grid point, trial index) triple identifies the same
draw sequence on every platform and under any thread schedule.  Child seeds
are derived from the master by folding indices through SplitMix64, which
avoids the correlated-stream pitfalls of seed arithmetic like ``master + i``.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One SplitMix64 output step: a bijective 64-bit mix of ``state``."""
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, *indices: int) -> int:
    """Derive a child seed from a master seed and any number of indices.

    The master is mixed once, then each index is xor-folded and re-mixed, so
    distinct index tuples give statistically independent child seeds.
    """
    state = splitmix64(master_seed & _MASK64)
    for index in indices:
        state = splitmix64(state ^ (index & _MASK64))
    return state


def philox_stream(seed: int) -> np.random.Generator:
    """A Philox-4x64-10 generator keyed by ``seed``.

    Philox is counter based: the draw sequence depends only on the key, not
    on process state, which keeps every experiment replayable bit for bit.
    """
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
