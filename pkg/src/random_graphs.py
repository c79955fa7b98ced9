"""Random graph models: G(n, p), random r-regular graphs, and threshold probabilities."""
from __future__ import annotations

import math
from typing import List, Optional

import numpy as np

from .config import get_config
from .graph import Edge, Graph
from .interfaces import GenerationFailure, InputError
from .logging import log_event
from .rng import generator

_GNP_CHUNK = 1 << 22


def threshold_p(n: int, a: float) -> float:
    """(ln n + a) / n clamped to [0, 1]."""
    if n < 2:
        raise InputError(f"threshold_p needs n >= 2, got {n}")
    return min(1.0, max(0.0, (math.log(n) + float(a)) / n))


def hamilton_threshold_p(n: int, omega: float) -> float:
    """(ln n + ln ln n + omega) / n clamped to [0, 1]; the Hamiltonicity window above connectivity."""
    if n < 3:
        raise InputError(f"hamilton_threshold_p needs n >= 3, got {n}")
    return min(1.0, max(0.0, (math.log(n) + math.log(math.log(n)) + float(omega)) / n))


def _row_offsets(n: int) -> np.ndarray:
    # linear index of (u, u+1) in lexicographic order of pairs u < v
    u = np.arange(n, dtype=np.int64)
    return u * n - u * (u + 1) // 2


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """
    Sample G(n, p): pairs (u, v), u < v, are visited in lexicographic order and each
    takes one uniform draw from the seeded stream; the pair is kept when draw < p.
    Equal (n, p, seed) reproduce the edge list exactly.
    """
    if n < 0:
        raise InputError(f"vertex count must be non-negative, got {n}")
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    total = n * (n - 1) // 2
    if total == 0:
        return Graph(n, [])
    rng = generator(seed)
    offsets = _row_offsets(n)
    edges: List[Edge] = []
    start = 0
    while start < total:
        count = min(_GNP_CHUNK, total - start)
        chosen = np.flatnonzero(rng.random(count) < p) + start
        if chosen.size:
            rows = np.searchsorted(offsets, chosen, side="right") - 1
            cols = chosen - offsets[rows] + rows + 1
            edges.extend(zip(rows.tolist(), cols.tolist()))
        start += count
    return Graph(n, edges)


def gen_random_regular(n: int, r: int, seed: int, max_resamples: Optional[int] = None) -> Graph:
    """
    Random simple r-regular graph from the pairing (configuration) model.
    Pairings with a loop or a repeated pair are rejected and redrawn.
    """
    if n < 0 or r < 0:
        raise InputError(f"n and r must be non-negative, got n={n}, r={r}")
    if (n * r) % 2:
        raise InputError(f"n*r must be even, got n={n}, r={r}")
    if n > 0 and r >= n:
        raise InputError(f"degree r={r} must be below n={n}")
    if r == 0 or n == 0:
        return Graph(n, [])
    budget = max_resamples if max_resamples is not None else get_config().regular_max_resamples
    rng = generator(seed)
    points = np.repeat(np.arange(n, dtype=np.int64), r)
    for attempt in range(1, budget + 1):
        pairs = rng.permutation(points).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        if np.any(lo == hi):
            continue
        keys = np.sort(lo * n + hi)
        if np.any(keys[1:] == keys[:-1]):
            continue
        if attempt > 1:
            log_event("regular.resampled", level="debug", n=n, r=r, attempts=attempt)
        edges = [(int(k // n), int(k % n)) for k in keys]
        return Graph(n, edges)
    raise GenerationFailure(f"no simple {r}-regular pairing on {n} vertices after {budget} resamplings")
