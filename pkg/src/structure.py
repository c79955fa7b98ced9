"""
Connectivity and cut structure, the small/large vertex partition, and the
sparse-subset, small-vertex and expander checks used to judge whether a sample
looks like a typical random graph at the connectivity threshold.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple, Union

import numpy as np

from .graph import Graph
from .interfaces import (
    CheckReport,
    CutStructure,
    InputError,
    ExpansionReport,
    SmallVertexReport,
    VertexPartition,
)
from .rng import substream

AdjacencyView = Union[Sequence[Sequence[Tuple[int, int]]], Mapping[int, Sequence[Tuple[int, int]]]]

_MAX_WITNESSES = 10


# ---- connectivity ----

def connected_components(G: Graph) -> List[List[int]]:
    seen = [False] * G.n
    components: List[List[int]] = []
    for root in range(G.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, _ in G.incident(v):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        components.append(sorted(comp))
    return components


def is_connected(G: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0; n = 0 and n = 1 count as connected."""
    if G.n <= 1:
        return True
    seen = bytearray(G.n)
    seen[0] = 1
    reached = 1
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, _ in G.incident(v):
            if not seen[w]:
                seen[w] = 1
                reached += 1
                queue.append(w)
    return reached == G.n


def bfs_distances(G: Graph, source: int, limit: int | None = None) -> Dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        if limit is not None and dist[v] >= limit:
            continue
        for w, _ in G.incident(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


# ---- low-link traversal ----

@dataclass
class LowLinkScan:
    bridges: Set[int]
    articulation_points: Set[int]
    blocks: List[List[int]]


def lowlink_scan(adjacency: AdjacencyView, roots: Iterable[int]) -> LowLinkScan:
    """
    One iterative DFS computing bridges, articulation points and biconnected blocks
    (as edge-id lists) of the part of `adjacency` reachable from `roots`.
    `adjacency[v]` yields (neighbor, edge_id) pairs; parallel edges are not expected.
    """
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    bridges: Set[int] = set()
    articulation: Set[int] = set()
    blocks: List[List[int]] = []
    timer = 0
    for root in roots:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        edge_stack: List[int] = []
        stack = [(root, -1, iter(adjacency[root]))]
        while stack:
            v, parent_eid, neighbors = stack[-1]
            descended = False
            for w, eid in neighbors:
                if eid == parent_eid:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    edge_stack.append(eid)
                    stack.append((w, eid, iter(adjacency[w])))
                    descended = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append(eid)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if descended:
                continue
            stack.pop()
            if not stack:
                break
            u = stack[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] > disc[u]:
                bridges.add(parent_eid)
            if low[v] >= disc[u]:
                if u != root:
                    articulation.add(u)
                block: List[int] = []
                while True:
                    f = edge_stack.pop()
                    block.append(f)
                    if f == parent_eid:
                        break
                blocks.append(block)
            if u == root:
                root_children += 1
        if root_children > 1:
            articulation.add(root)
    return LowLinkScan(bridges=bridges, articulation_points=articulation, blocks=blocks)


def find_bridges(G: Graph) -> CutStructure:
    scan = lowlink_scan([G.incident(v) for v in range(G.n)], range(G.n))
    return CutStructure(
        bridges=frozenset(scan.bridges),
        articulation_points=frozenset(scan.articulation_points),
        cut_edge_subgraph=G.spanning_subgraph(scan.bridges),
    )


def biconnected_blocks(G: Graph) -> List[List[int]]:
    """Edge-id lists of the blocks of G, each sorted; bridges come out as one-edge blocks."""
    scan = lowlink_scan([G.incident(v) for v in range(G.n)], range(G.n))
    return sorted(sorted(block) for block in scan.blocks)


def is_two_edge_connected(G: Graph) -> bool:
    return G.n >= 2 and is_connected(G) and not find_bridges(G).bridges


def is_two_connected(G: Graph) -> bool:
    return G.n >= 3 and is_connected(G) and not find_bridges(G).articulation_points


def cjv_condition(G: Graph) -> bool:
    """True iff every component of the cut-edge subgraph C(G) is a single edge (vacuous without bridges)."""
    if not is_connected(G):
        raise InputError("cjv_condition requires a connected graph")
    cut = find_bridges(G).cut_edge_subgraph
    # a forest whose components are all K2 is exactly a matching
    return all(cut.degree(v) <= 1 for v in range(cut.n))


# ---- small / large partition ----

def partition_threshold(n: int) -> float:
    return math.log(n) / 10.0


def classify_vertices(G: Graph, threshold: float | None = None) -> VertexPartition:
    """Large iff degree >= ln(n)/10 (ties are large); `threshold` overrides the cut-off."""
    if G.n < 2:
        raise InputError(f"classify_vertices needs n >= 2, got {G.n}")
    cut = partition_threshold(G.n) if threshold is None else float(threshold)
    small = frozenset(v for v in range(G.n) if G.degree(v) < cut)
    large = frozenset(v for v in range(G.n) if v not in small)
    return VertexPartition(small=small, large=large, threshold=cut)


def _close_small_pairs(G: Graph, small: frozenset[int]) -> List[Tuple[int, int]]:
    pairs: Set[Tuple[int, int]] = set()
    for s in sorted(small):
        for w, _ in G.incident(s):
            if w in small:
                pairs.add((min(s, w), max(s, w)))
            for x, _ in G.incident(w):
                if x != s and x in small:
                    pairs.add((min(s, x), max(s, x)))
    return sorted(pairs)


def check_prop2(G: Graph, partition: VertexPartition) -> SmallVertexReport:
    """|V1| <= n^0.4; small vertices pairwise at distance >= 3; at most n^0.5 edges touch V1."""
    n = G.n
    small = partition.small
    size_cap = math.floor(n ** 0.4) if n > 0 else 0
    size_report = CheckReport(
        check_name="small_vertices.count",
        passed=len(small) <= size_cap,
        witnesses=[] if len(small) <= size_cap else [len(small)],
        details={"small": len(small), "bound": size_cap},
    )

    close = _close_small_pairs(G, small)
    distance_report = CheckReport(
        check_name="small_vertices.distance",
        passed=not close,
        witnesses=[list(pair) for pair in close[:_MAX_WITNESSES]],
        violations=len(close),
    )

    incident = sum(1 for u, v in G.edges if u in small or v in small)
    edge_cap = math.floor(n ** 0.5) if n > 0 else 0
    edge_report = CheckReport(
        check_name="small_vertices.incident_edges",
        passed=incident <= edge_cap,
        witnesses=[] if incident <= edge_cap else [incident],
        details={"incident": incident, "bound": edge_cap},
    )
    return SmallVertexReport(size_bound=size_report, small_distance=distance_report, incident_edges=edge_report)


# ---- sparse subsets and cross edges, sampled ----

def _not_applicable(name: str, reason: str, trials: int) -> CheckReport:
    return CheckReport(check_name=name, passed=True, sampled=True, trials=trials, applicable=False, details={"reason": reason})


def check_prop1_sampled(G: Graph, p: float, trials: int, seed: int) -> ExpansionReport:
    """
    Spot-check subset sparsity and cross edges on `trials` random subsets each:
    e(S) < |S| n p / 25 for 2 <= |S| <= n/38, and e(U, W) > 0 for disjoint
    U, W with |U|, |W| >= n / ln ln n. A pass is sampled evidence, not proof.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    n = G.n
    if n < 16:
        reason = "n < 16 (ln ln n <= 1)"
        return ExpansionReport(
            sparse_subsets=_not_applicable("expansion.sparse_subsets", reason, trials),
            cross_edges=_not_applicable("expansion.cross_edges", reason, trials),
        )
    return ExpansionReport(
        sparse_subsets=_sample_sparse_subsets(G, p, trials, seed),
        cross_edges=_sample_cross_edges(G, trials, seed),
    )


def _sample_sparse_subsets(G: Graph, p: float, trials: int, seed: int) -> CheckReport:
    n = G.n
    name = "expansion.sparse_subsets"
    s_max = math.floor(n / 38)
    if s_max < 2:
        return _not_applicable(name, f"n/38 < 2 for n={n}", trials)
    rng = substream(seed, 1)
    violations = 0
    witnesses: List[Dict[str, object]] = []
    for _ in range(trials):
        s = int(rng.integers(2, s_max + 1))
        S = rng.choice(n, size=s, replace=False)
        inside = G.edges_within(S.tolist())
        bound = s * n * p / 25.0
        if inside >= bound:
            violations += 1
            if len(witnesses) < _MAX_WITNESSES:
                witnesses.append({"size": s, "edges": inside, "bound": bound})
    return CheckReport(
        check_name=name,
        passed=violations == 0,
        witnesses=witnesses,
        sampled=True,
        trials=trials,
        violations=violations,
        details={"max_size": s_max},
    )


def _sample_cross_edges(G: Graph, trials: int, seed: int) -> CheckReport:
    n = G.n
    name = "expansion.cross_edges"
    lo = math.ceil(n / math.log(math.log(n)))
    if 2 * lo > n:
        return _not_applicable(name, f"two disjoint sets of size >= {lo} do not fit in n={n}", trials)
    rng = substream(seed, 2)
    violations = 0
    witnesses: List[Dict[str, object]] = []
    for _ in range(trials):
        s = int(rng.integers(lo, n - lo + 1))
        t = int(rng.integers(lo, n - s + 1))
        order = rng.permutation(n)
        U = order[:s].tolist()
        W = order[s:s + t].tolist()
        if G.edges_between(U, W) == 0:
            violations += 1
            if len(witnesses) < _MAX_WITNESSES:
                witnesses.append({"sizes": [s, t]})
    return CheckReport(
        check_name=name,
        passed=violations == 0,
        witnesses=witnesses,
        sampled=True,
        trials=trials,
        violations=violations,
        details={"min_size": lo},
    )


# ---- expansion ----

def expansion_deficit(G: Graph, U: Iterable[int], c: float) -> float:
    """|N(U) \\ U| - c|U|; negative means U refutes (k, c)-expansion."""
    members = set(U)
    return len(G.neighborhood(members)) - c * len(members)


def _grown_subset(G: Graph, size: int, rng: np.random.Generator) -> List[int]:
    start = int(rng.integers(0, G.n))
    chosen = {start}
    frontier = [start]
    while len(chosen) < size and frontier:
        pick = int(rng.integers(0, len(frontier)))
        v = frontier[pick]
        fresh = [w for w, _ in G.incident(v) if w not in chosen]
        if not fresh:
            frontier.pop(pick)
            continue
        w = fresh[int(rng.integers(0, len(fresh)))]
        chosen.add(w)
        frontier.append(w)
    return sorted(chosen)


def check_expander_sampled(G: Graph, k: int, c: float, trials: int, seed: int) -> CheckReport:
    """
    Sample subsets U with |U| <= k, alternating uniform draws and BFS-grown
    connected sets, and report any with |N(U) \\ U| < c|U|. A refutation is
    conclusive; a pass is evidence only.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if c <= 0:
        raise InputError(f"c must be positive, got {c}")
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    name = "expander"
    if G.n == 0:
        return _not_applicable(name, "empty vertex set", trials)
    rng = substream(seed, 3)
    cap = min(k, G.n)
    violations = 0
    witnesses: List[object] = []
    for t in range(trials):
        size = int(rng.integers(1, cap + 1))
        if t % 2 == 0:
            U = sorted(rng.choice(G.n, size=size, replace=False).tolist())
        else:
            U = _grown_subset(G, size, rng)
        if expansion_deficit(G, U, c) < 0:
            violations += 1
            if len(witnesses) < _MAX_WITNESSES:
                witnesses.append(U if len(U) <= 20 else {"size": len(U)})
    return CheckReport(
        check_name=name,
        passed=violations == 0,
        witnesses=witnesses,
        sampled=True,
        trials=trials,
        violations=violations,
        details={"k": k, "c": c},
    )
