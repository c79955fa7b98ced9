"""Matching that saturates the small vertices, each paired with a large neighbor."""
from __future__ import annotations

from typing import Dict, List, Set

from .graph import Graph
from .interfaces import ConstructionFailure, PendantMatching, VertexPartition
from .logging import log_event


def _greedy(G: Graph, small: List[int], large: frozenset[int]) -> Dict[int, int] | None:
    taken: Set[int] = set()
    partner: Dict[int, int] = {}
    for s in small:
        choice = next((w for w, _ in G.incident(s) if w in large and w not in taken), None)
        if choice is None:
            return None
        taken.add(choice)
        partner[s] = choice
    return partner


def _augmenting(G: Graph, small: List[int], large: frozenset[int]) -> Dict[int, int]:
    # owner[y] = small vertex currently matched to large y
    owner: Dict[int, int] = {}

    def search(x: int, seen: Set[int]) -> bool:
        for y, _ in G.incident(x):
            if y not in large or y in seen:
                continue
            seen.add(y)
            if y not in owner or search(owner[y], seen):
                owner[y] = x
                return True
        return False

    for x in small:
        if not search(x, set()):
            raise ConstructionFailure("matching", f"small vertex {x} cannot be matched to a large neighbor", witness=x)
    return {x: y for y, x in owner.items()}


def build_pendant_matching(G: Graph, partition: VertexPartition) -> PendantMatching:
    """
    Greedy first: each small vertex takes its lowest free large neighbor, which never
    conflicts when small vertices are far apart. Otherwise fall back to augmenting
    paths; raises ConstructionFailure("matching") with the unsaturated small vertex.
    """
    small = sorted(partition.small)
    if not small:
        return PendantMatching(pairs=())
    partner = _greedy(G, small, partition.large)
    if partner is None:
        log_event("matching.greedy_conflict", level="debug", small=len(small))
        partner = _augmenting(G, small, partition.large)
    return PendantMatching(pairs=tuple((s, partner[s]) for s in small))
