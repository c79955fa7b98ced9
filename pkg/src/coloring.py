"""
Solvers for the conflict-free connection number: the constructive 2-coloring
(Hamiltonian cycle on the large vertices plus a pendant matching), the exact
enumeration for small graphs, and the upper-bound ladder combining them.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, List, Tuple

from .cfc import EdgeColoring, edge_path, is_conflict_free_connected
from .config import get_config
from .graph import Graph
from .hamilton import hamiltonian_cycle_on_subset
from .interfaces import (
    BudgetExceeded,
    ConstructionFailure,
    ConstructionResult,
    ExactResult,
    InputError,
    UpperBound,
)
from .logging import log_call, log_event
from .matching import build_pendant_matching
from .rng import substream
from .structure import cjv_condition, classify_vertices, is_connected

# degree-1 vertices count as small on the second constructive attempt
PENDANT_THRESHOLD = 2.0


@log_call
def construct_cfc2_coloring(
    G: Graph,
    seed: int = 0,
    *,
    restarts: int | None = None,
    store_witnesses: bool | None = None,
    threshold: float | None = None,
) -> ConstructionResult:
    """
    Color one edge of a Hamiltonian cycle of G[V2] with 2 and everything else 1.

    The cycle plus the pendant matching must span G; the result is handed to the
    checker before it is returned. Failures raise ConstructionFailure naming the
    stage (partition, matching, hamilton, spanning, certify). `threshold` overrides
    the degree cut-off between small and large vertices.
    """
    if G.n < 3:
        raise InputError(f"constructive coloring needs n >= 3, got {G.n}")
    if not is_connected(G):
        raise InputError("constructive coloring needs a connected graph")

    partition = classify_vertices(G, threshold)
    if len(partition.large) < 3:
        raise ConstructionFailure("partition", f"only {len(partition.large)} large vertices", witness=len(partition.large))
    matching = build_pendant_matching(G, partition)

    ham = hamiltonian_cycle_on_subset(G, partition.large, restarts=restarts, seed=seed)
    if ham.cycle is None:
        raise ConstructionFailure("hamilton", f"no Hamiltonian cycle on G[V2] ({ham.method})", witness=ham.method)
    cycle = ham.cycle
    cycle_edges = edge_path(G, list(cycle) + [cycle[0]])
    matching_edges = [G.edge_id(s, x) for s, x in matching.pairs]
    spanning = tuple(sorted(set(cycle_edges) | set(matching_edges)))

    touched = set(cycle) | {s for s, _ in matching.pairs}
    if len(touched) != G.n:
        uncovered = min(v for v in range(G.n) if v not in touched)
        raise ConstructionFailure("spanning", f"vertex {uncovered} is outside the cycle and the matching", witness=uncovered)
    sub = G.spanning_subgraph(spanning)
    if not is_connected(sub):
        raise ConstructionFailure("spanning", "cycle plus matching is not connected", witness=None)

    designated = min(cycle_edges)
    colors = [1] * G.m
    colors[designated] = 2
    coloring = EdgeColoring(G, colors, palette_size=2)

    certificate = is_conflict_free_connected(G, coloring, store_witnesses=store_witnesses, seed=seed)
    if not certificate.certified:
        raise ConstructionFailure("certify", "checker refuted the constructed coloring", witness=certificate.failing_pair)
    return ConstructionResult(
        coloring=coloring,
        cycle=cycle,
        matching=matching,
        partition=partition,
        designated_edge=designated,
        spanning_edges=spanning,
        spanning_cjv=cjv_condition(sub),
        certificate=certificate,
    )


# ---- exact ----

def _edge_order(G: Graph) -> List[int]:
    """Edges in order of discovery by BFS from vertex 0, so short paths complete early."""
    order: List[int] = []
    placed = [False] * G.m
    seen = [False] * G.n
    for root in range(G.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, eid in G.incident(v):
                if not placed[eid]:
                    placed[eid] = True
                    order.append(eid)
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def _simple_path_masks(G: Graph) -> Dict[Tuple[int, int], List[int]]:
    """Every simple path between non-adjacent pairs, as a bitmask over edge ids."""
    paths: Dict[Tuple[int, int], List[int]] = {}
    for source in range(G.n):
        stack = [(source, 1 << source, 0, iter(G.incident(source)))]
        while stack:
            v, visited, mask, neighbors = stack[-1]
            step = next(neighbors, None)
            if step is None:
                stack.pop()
                continue
            w, eid = step
            if visited >> w & 1:
                continue
            grown = mask | (1 << eid)
            if w > source and not G.has_edge(source, w):
                paths.setdefault((source, w), []).append(grown)
            stack.append((w, visited | (1 << w), grown, iter(G.incident(w))))
    return paths


@log_call
def cfc_exact(G: Graph, max_k: int | None = None, edge_budget: int | None = None) -> ExactResult:
    """
    Smallest k <= max_k admitting a conflict-free connected k-coloring.

    Colorings are enumerated canonically (edges in BFS order, the first edge gets
    color 1, a new color is at most one above the largest used so far) and a
    branch is cut as soon as some pair has all of its paths colored and none of
    them is conflict-free. `colorings_tested` counts partial assignments examined.
    """
    cfg = get_config()
    max_k = cfg.cfc_max_k if max_k is None else int(max_k)
    budget = cfg.cfc_edge_budget if edge_budget is None else int(edge_budget)
    if G.n < 2:
        raise InputError(f"cfc is defined for n >= 2, got {G.n}")
    if not is_connected(G):
        raise InputError("cfc is only defined for connected graphs")
    if G.m > budget:
        raise BudgetExceeded(f"graph has {G.m} edges, exact search is limited to {budget}")
    if G.is_complete():
        return ExactResult(value=1, coloring=EdgeColoring.uniform(G), colorings_tested=0)

    order = _edge_order(G)
    position = {eid: i for i, eid in enumerate(order)}
    paths = _simple_path_masks(G)
    due: List[List[List[int]]] = [[] for _ in range(G.m)]
    for masks in paths.values():
        union = 0
        for mask in masks:
            union |= mask
        last = max(position[eid] for eid in range(G.m) if union >> eid & 1)
        due[last].append(masks)

    tested = 0
    for k in range(2, max_k + 1):
        class_mask = [0] * (k + 1)
        colors = [0] * G.m

        def satisfied(masks: List[int]) -> bool:
            return any(any((mask & cm).bit_count() == 1 for cm in class_mask[1:]) for mask in masks)

        def extend(i: int, used: int) -> bool:
            nonlocal tested
            if i == G.m:
                return True
            eid = order[i]
            bit = 1 << eid
            for c in range(1, min(used + 1, k) + 1):
                tested += 1
                class_mask[c] |= bit
                colors[eid] = c
                if all(satisfied(masks) for masks in due[i]) and extend(i + 1, max(used, c)):
                    return True
                class_mask[c] ^= bit
            return False

        if extend(0, 0):
            log_event("cfc.exact", level="debug", n=G.n, m=G.m, value=k, tested=tested)
            return ExactResult(value=k, coloring=EdgeColoring(G, colors, palette_size=k), colorings_tested=tested)
    raise BudgetExceeded(f"no conflict-free connected coloring with at most {max_k} colors")


# ---- upper bound ladder ----

@log_call
def cfc_upper(G: Graph, seed: int = 0, *, store_witnesses: bool | None = None) -> UpperBound:
    """
    Best certified bound we can get cheaply: complete -> 1, then the constructive
    2-coloring, then random 2-colorings, then the exact solver when the graph is
    small enough, and finally the all-distinct coloring (m colors, uncertified).
    """
    if not is_connected(G):
        raise InputError("cfc_upper needs a connected graph")
    if G.is_complete():
        return UpperBound(bound=1, method="complete", coloring=EdgeColoring.uniform(G), stage_reached="complete")

    cfg = get_config()
    stage = ""
    if G.n >= 3:
        # pendant vertices block any Hamiltonian cycle through them; the second
        # attempt moves them into the small side so the matching absorbs them
        thresholds = [None]
        if min(G.degree_sequence()) == 1:
            thresholds.append(PENDANT_THRESHOLD)
        for threshold in thresholds:
            try:
                built = construct_cfc2_coloring(G, seed, store_witnesses=store_witnesses, threshold=threshold)
            except ConstructionFailure as exc:
                stage = stage or exc.stage
                log_event(
                    "cfc.construction_failed",
                    level="info",
                    n=G.n,
                    m=G.m,
                    stage=exc.stage,
                    witness=exc.witness,
                    threshold=threshold,
                )
                continue
            return UpperBound(
                bound=2,
                method="constructive",
                coloring=built.coloring,
                certificate=built.certificate,
                stage_reached="constructive",
            )

    for attempt in range(cfg.cfc_random_colorings):
        rng = substream(seed, 1, attempt)
        coloring = EdgeColoring(G, rng.integers(1, 3, size=G.m).tolist(), palette_size=2)
        certificate = is_conflict_free_connected(G, coloring, store_witnesses=store_witnesses, seed=seed)
        if certificate.certified:
            return UpperBound(bound=2, method="randomized", coloring=coloring, certificate=certificate, stage_reached=stage)

    if G.m <= cfg.cfc_edge_budget:
        try:
            exact = cfc_exact(G)
        except BudgetExceeded:
            pass
        else:
            certificate = is_conflict_free_connected(G, exact.coloring, store_witnesses=store_witnesses, seed=seed)
            return UpperBound(bound=exact.value, method="exact", coloring=exact.coloring, certificate=certificate, stage_reached=stage)

    trivial = EdgeColoring(G, range(1, G.m + 1), palette_size=max(1, G.m))
    return UpperBound(bound=G.m, method="trivial", coloring=trivial, stage_reached=stage)
