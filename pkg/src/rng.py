"""
Seeded randomness for every generator and sampled check.

All randomness flows through numpy's PCG64 bit generator. A stream is named by
a 64-bit seed plus an optional path of integer indices; `substream(seed, i)`
feeds `SeedSequence([seed, i])`, so trial i of an experiment draws from the same
numbers regardless of which worker runs it or in which order.
"""
from __future__ import annotations

import numpy as np

_SEED_MASK = (1 << 64) - 1


def _normalize(seed: int) -> int:
    return int(seed) & _SEED_MASK


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_normalize(seed))))


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Independent generator for (seed, index, ...); equal arguments give identical streams."""
    entropy = [_normalize(seed)] + [_normalize(i) for i in indices]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def substream_seed(seed: int, *indices: int) -> int:
    """A derived 64-bit seed, for records that must name the seed a trial ran with."""
    entropy = [_normalize(seed)] + [_normalize(i) for i in indices]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 32) | int(state[1])
