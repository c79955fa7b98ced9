"""
Hamiltonian cycle search.

Rotation-extension on a growing path with seeded restarts; graphs up to the
exact cutoff fall through to bitmask backtracking so that a miss there is
definitive. Obvious obstructions (disconnected, a vertex of degree < 2, an
articulation point) are answered exactly before any search.
"""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_config
from .graph import Graph
from .interfaces import HamResult, InputError
from .logging import log_event
from .rng import substream
from .structure import find_bridges, is_connected


def verify_cycle(G: Graph, cycle: Sequence[int], vertices: Iterable[int] | None = None) -> bool:
    """Consecutive vertices (cyclically) adjacent and every target vertex visited exactly once."""
    target = set(range(G.n)) if vertices is None else set(vertices)
    if len(cycle) < 3 or len(cycle) != len(target) or set(cycle) != target:
        return False
    return all(G.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


def rotate(path: List[int], pivot: int) -> List[int]:
    """Pósa rotation: the end is adjacent to path[pivot]; reverse everything after the pivot."""
    rotated = path[: pivot + 1] + path[: pivot : -1]
    assert len(rotated) == len(path) and rotated[-1] == path[pivot + 1]
    return rotated


def _canonical(cycle: Sequence[int]) -> Tuple[int, ...]:
    k = len(cycle)
    i = min(range(k), key=lambda j: cycle[j])
    forward = [cycle[(i + j) % k] for j in range(k)]
    if forward[1] > forward[-1]:
        forward = [forward[0]] + forward[:0:-1]
    return tuple(forward)


def _obstructed(G: Graph) -> Optional[str]:
    if G.n < 3:
        return "fewer than 3 vertices"
    if not is_connected(G):
        return "disconnected"
    if min(G.degree_sequence()) < 2:
        return "vertex of degree < 2"
    if find_bridges(G).articulation_points:
        return "articulation point"
    return None


def _rotation_extension(G: Graph, rng: np.random.Generator, budget: int) -> Optional[List[int]]:
    n = G.n
    start = int(rng.integers(0, n))
    path = [start]
    pos = [-1] * n
    pos[start] = 0
    rotations = 0
    while True:
        end = path[-1]
        fresh = [w for w, _ in G.incident(end) if pos[w] < 0]
        if fresh:
            # prefer the neighbor with the fewest unvisited neighbors of its own
            free = [sum(1 for x, _ in G.incident(w) if pos[x] < 0) for w in fresh]
            fewest = min(free)
            fresh = [w for w, k in zip(fresh, free) if k == fewest]
            w = fresh[int(rng.integers(0, len(fresh)))]
            pos[w] = len(path)
            path.append(w)
            continue
        if any(pos[w] < 0 for w, _ in G.incident(path[0])):
            path.reverse()
            for i, v in enumerate(path):
                pos[v] = i
            continue
        if len(path) == n and G.has_edge(path[0], end):
            return path
        if rotations >= budget:
            return None
        if rng.random() < 0.5:
            path.reverse()
            for i, v in enumerate(path):
                pos[v] = i
            end = path[-1]
        pivots = [pos[w] for w, _ in G.incident(end) if pos[w] < len(path) - 2]
        rotations += 1
        if not pivots:
            continue
        pivot = pivots[int(rng.integers(0, len(pivots)))]
        path = rotate(path, pivot)
        for i in range(pivot + 1, len(path)):
            pos[path[i]] = i


def _exact_search(G: Graph) -> Optional[List[int]]:
    n = G.n
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    full = (1 << n) - 1
    start = min(range(n), key=lambda v: (G.degree(v), v))
    path = [start]

    def feasible(unvisited: int, end: int) -> bool:
        reachable = unvisited | (1 << end) | (1 << start)
        rest = unvisited
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            if (adj[u] & reachable).bit_count() < 2:
                return False
            rest ^= low
        return True

    def extend(end: int, visited: int) -> bool:
        if visited == full:
            return bool(adj[end] >> start & 1)
        unvisited = full & ~visited
        if not feasible(unvisited, end):
            return False
        options = []
        rest = adj[end] & unvisited
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            options.append(((adj[w] & unvisited).bit_count(), w))
            rest ^= low
        for _, w in sorted(options):
            path.append(w)
            if extend(w, visited | (1 << w)):
                return True
            path.pop()
        return False

    return path if extend(start, 1 << start) else None


def hamiltonian_cycle(G: Graph, restarts: int | None = None, seed: int = 0) -> HamResult:
    cfg = get_config()
    restarts = cfg.ham_restarts if restarts is None else int(restarts)
    if restarts < 0:
        raise InputError(f"restarts must be non-negative, got {restarts}")
    reason = _obstructed(G)
    if reason is not None:
        log_event("hamilton.obstructed", level="debug", n=G.n, reason=reason)
        return HamResult(cycle=None, method="exact", restarts_used=0)

    budget = cfg.ham_rotations_per_vertex * G.n
    for restart in range(restarts):
        path = _rotation_extension(G, substream(seed, restart), budget)
        if path is not None:
            cycle = _canonical(path)
            assert verify_cycle(G, cycle)
            return HamResult(cycle=cycle, method="heuristic", restarts_used=restart + 1)

    if G.n <= cfg.ham_exact_cutoff:
        path = _exact_search(G)
        if path is None:
            return HamResult(cycle=None, method="exact", restarts_used=restarts)
        cycle = _canonical(path)
        assert verify_cycle(G, cycle)
        return HamResult(cycle=cycle, method="exact", restarts_used=restarts)

    log_event("hamilton.exhausted", level="info", n=G.n, m=G.m, restarts=restarts)
    return HamResult(cycle=None, method="heuristic", restarts_used=restarts)


def hamiltonian_cycle_on_subset(G: Graph, S: Iterable[int], restarts: int | None = None, seed: int = 0) -> HamResult:
    """Search G[S]; the returned cycle carries vertex ids of G."""
    members = set(S)
    if len(members) < 3:
        raise InputError(f"Hamiltonian cycle on a subset needs |S| >= 3, got {len(members)}")
    outside = [v for v in members if not (0 <= v < G.n)]
    if outside:
        raise InputError(f"vertices {sorted(outside)[:5]} are not in 0..{G.n - 1}")
    H, labels = G.induced_subgraph(members)
    result = hamiltonian_cycle(H, restarts=restarts, seed=seed)
    if result.cycle is None:
        return result
    return HamResult(
        cycle=_canonical([labels[v] for v in result.cycle]),
        method=result.method,
        restarts_used=result.restarts_used,
    )
