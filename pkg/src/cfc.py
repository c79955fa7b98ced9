"""
Edge colorings, conflict-free paths and conflict-free connectivity certificates.

A u-v path is conflict-free when some color occurs on exactly one of its edges.
For a color c and an edge e of color c, every u-v path that uses e and no other
c-edge is conflict-free; such a path exists exactly when u and v hang off the
block of e (in G minus the other c-edges) at two different block vertices.
The checker evaluates that criterion for every c-edge at once from one
block-cut forest per color, then sweeps the vertex pairs in row blocks, so it
is exact without enumerating paths and never holds an n x n matrix. Witness
paths are built on demand for the pairs that are stored.
"""
from __future__ import annotations

from collections import Counter, deque
from functools import cached_property
from pathlib import Path
from typing import Any, Collection, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_config
from .graph import Graph
from .interfaces import CfcCertificate, InputError, VertexPair
from .logging import log_event
from .rng import substream
from .structure import is_connected, lowlink_scan


class EdgeColoring:
    """Total coloring E(G) -> {1..palette_size}, indexed by edge id."""

    def __init__(self, graph: Graph, colors: Iterable[int], palette_size: int | None = None) -> None:
        values = tuple(int(c) for c in colors)
        if len(values) != graph.m:
            raise InputError(f"coloring has {len(values)} colors for a graph with {graph.m} edges")
        top = max(values, default=1)
        palette = top if palette_size is None else int(palette_size)
        if palette < 1:
            raise InputError(f"palette size must be >= 1, got {palette}")
        bad = next((eid for eid, c in enumerate(values) if not 1 <= c <= palette), None)
        if bad is not None:
            raise InputError(f"edge {bad} has color {values[bad]} outside 1..{palette}")
        self.graph = graph
        self.colors = values
        self.palette_size = palette

    def __repr__(self) -> str:
        return f"EdgeColoring(m={len(self.colors)}, t={self.palette_size})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self.graph == other.graph and self.colors == other.colors and self.palette_size == other.palette_size

    def color(self, eid: int) -> int:
        return self.colors[eid]

    def classes(self) -> Dict[int, List[int]]:
        """color -> ascending edge ids, for colors that are actually used."""
        out: Dict[int, List[int]] = {}
        for eid, c in enumerate(self.colors):
            out.setdefault(c, []).append(eid)
        return out

    @classmethod
    def uniform(cls, graph: Graph, color: int = 1) -> "EdgeColoring":
        return cls(graph, [color] * graph.m, palette_size=max(1, color))


# ---- single paths ----

def path_vertices(G: Graph, path: Sequence[int]) -> List[int]:
    """Vertex sequence of an edge-id path; raises InputError unless it is a simple path of G."""
    if not path:
        raise InputError("a path needs at least one edge")
    for eid in path:
        if not 0 <= eid < G.m:
            raise InputError(f"edge id {eid} outside 0..{G.m - 1}")
    u, v = G.edge(path[0])
    if len(path) == 1:
        return [u, v]
    nxt = set(G.edge(path[1]))
    if v in nxt:
        walk = [u, v]
    elif u in nxt:
        walk = [v, u]
    else:
        raise InputError(f"edges {path[0]} and {path[1]} are not consecutive")
    for eid in path[1:]:
        a, b = G.edge(eid)
        if walk[-1] == a:
            walk.append(b)
        elif walk[-1] == b:
            walk.append(a)
        else:
            raise InputError(f"edge {eid} does not continue the path at vertex {walk[-1]}")
    if len(set(walk)) != len(walk):
        raise InputError(f"path repeats a vertex: {walk}")
    return walk


def edge_path(G: Graph, vertices: Sequence[int]) -> List[int]:
    """Edge ids along a vertex sequence; InputError if two consecutive vertices are not adjacent."""
    return [G.edge_id(vertices[i], vertices[i + 1]) for i in range(len(vertices) - 1)]


def is_conflict_free_path(coloring: EdgeColoring, path: Sequence[int]) -> bool:
    path_vertices(coloring.graph, path)
    counts = Counter(coloring.colors[eid] for eid in path)
    return any(k == 1 for k in counts.values())


def path_through_edge(
    G: Graph, allowed: Collection[int] | None, e: int, u: int, v: int
) -> Optional[List[int]]:
    """
    A simple u-v path (vertex list) that uses edge e and otherwise only edges in
    `allowed` (None allows every edge), or None when no such path exists.

    e is subdivided by a virtual vertex; the path exists iff that vertex has two
    vertex-disjoint paths to {u, v}. Vertices are split into in/out nodes of
    capacity one and two augmenting paths are searched breadth-first.
    """
    if u == v:
        raise InputError("path endpoints must differ")
    a, b = G.edge(e)
    if {u, v} == {a, b}:
        return [u, v]
    n = G.n
    source, sink = 2 * n, 2 * n + 1
    heads: List[int] = []
    caps: List[int] = []
    arcs: List[List[int]] = [[] for _ in range(2 * n + 2)]

    def arc(x: int, y: int) -> None:
        arcs[x].append(len(heads))
        heads.append(y)
        caps.append(1)
        arcs[y].append(len(heads))
        heads.append(x)
        caps.append(0)

    for x in range(n):
        arc(2 * x, 2 * x + 1)
    for f, (x, y) in enumerate(G.edges):
        if f == e or (allowed is not None and f not in allowed):
            continue
        arc(2 * x + 1, 2 * y)
        arc(2 * y + 1, 2 * x)
    arc(source, 2 * a)
    arc(source, 2 * b)
    arc(2 * u + 1, sink)
    arc(2 * v + 1, sink)

    for _ in range(2):
        parent_arc = [-1] * (2 * n + 2)
        parent_arc[source] = -2
        queue = deque([source])
        while queue and parent_arc[sink] == -1:
            node = queue.popleft()
            for idx in arcs[node]:
                if caps[idx] and parent_arc[heads[idx]] == -1:
                    parent_arc[heads[idx]] = idx
                    queue.append(heads[idx])
        if parent_arc[sink] == -1:
            return None
        node = sink
        while node != source:
            idx = parent_arc[node]
            caps[idx] -= 1
            caps[idx ^ 1] += 1
            node = heads[idx ^ 1]

    legs: List[List[int]] = []
    for start in (a, b):
        leg = [start]
        node = 2 * start
        while True:
            # forward arcs sit at even indices; a saturated one carries flow
            idx = next(i for i in arcs[node] if i % 2 == 0 and caps[i] == 0)
            node = heads[idx]
            if node == sink:
                break
            if node % 2 == 0:
                leg.append(node // 2)
        legs.append(leg)
    first, second = legs
    if first[-1] == u:
        return first[::-1] + second
    return second[::-1] + first


def _color_order(coloring: EdgeColoring) -> List[Tuple[int, List[int]]]:
    classes = coloring.classes()
    return sorted(classes.items(), key=lambda item: (len(item[1]), item[0]))


class _ColorCover:
    """
    Pairs made conflict-free by a single color c, read off the block-cut forest
    of H = G minus every c-edge.

    A c-edge e = (a, b) joining two components of H covers every pair split
    across them. A c-edge inside a component merges the blocks on the a-b path
    of the forest into one block; u and v then attach to it at different
    vertices exactly when their own forest path meets one of those blocks. So
    inside a component, u and v stay uncovered by c iff they share a class of
    the forest with all c-path blocks removed.
    """

    def __init__(self, G: Graph, colors: Sequence[int], c: int) -> None:
        n = G.n
        self.graph = G
        self.color = c
        self._colors = colors
        adjacency = [[(w, f) for w, f in G.incident(x) if colors[f] != c] for x in range(n)]

        comp = [-1] * n
        for start in range(n):
            if comp[start] >= 0:
                continue
            comp[start] = start
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for w, _ in adjacency[x]:
                    if comp[w] < 0:
                        comp[w] = start
                        queue.append(w)

        scan = lowlink_scan(adjacency, range(n))
        n_blocks = len(scan.blocks)
        cut_node = {x: n_blocks + i for i, x in enumerate(sorted(scan.articulation_points))}
        size = n_blocks + len(cut_node)
        tree: List[List[int]] = [[] for _ in range(size)]
        node_of = [-1] * n
        for k, block in enumerate(scan.blocks):
            for x in {x for f in block for x in G.edge(f)}:
                if x in cut_node:
                    tree[k].append(cut_node[x])
                    tree[cut_node[x]].append(k)
                else:
                    node_of[x] = k
        for x, node in cut_node.items():
            node_of[x] = node

        # node `size` is a sentinel parent above every root
        parent = [size] * (size + 1)
        depth = [-1] * (size + 1)
        for root in range(size):
            if depth[root] >= 0:
                continue
            depth[root] = 0
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y in tree[x]:
                    if depth[y] < 0:
                        depth[y] = depth[x] + 1
                        parent[y] = x
                        queue.append(y)
        lift = [parent]
        for _ in range(max(1, size.bit_length())):
            prev = lift[-1]
            lift.append([prev[prev[x]] for x in range(size + 1)])

        def lca(x: int, y: int) -> int:
            if depth[x] < depth[y]:
                x, y = y, x
            gap = depth[x] - depth[y]
            level = 0
            while gap:
                if gap & 1:
                    x = lift[level][x]
                gap >>= 1
                level += 1
            if x == y:
                return x
            for level in range(len(lift) - 1, -1, -1):
                if lift[level][x] != lift[level][y]:
                    x, y = lift[level][x], lift[level][y]
            return parent[x]

        # paint every forest path spanned by an inner c-edge; `free` skips painted nodes
        rep = [-1] * size
        free = list(range(size + 1))

        def first_free(x: int) -> int:
            root = x
            while free[root] != root:
                root = free[root]
            while free[x] != root:
                free[x], x = root, free[x]
            return root

        def paint(x: int, floor: int, e: int) -> None:
            x = first_free(x)
            while depth[x] >= floor:
                rep[x] = e
                free[x] = parent[x]
                x = first_free(parent[x])

        joined_by: Dict[Tuple[int, int], int] = {}
        for e, (a, b) in enumerate(G.edges):
            if colors[e] != c:
                continue
            if comp[a] != comp[b]:
                joined_by.setdefault((comp[a], comp[b]), e)
                joined_by.setdefault((comp[b], comp[a]), e)
                continue
            x, y = node_of[a], node_of[b]
            floor = depth[lca(x, y)]
            paint(x, floor, e)
            paint(y, floor, e)

        removed = [k < n_blocks and rep[k] >= 0 for k in range(size)]
        region = [-1] * size
        for start in range(size):
            if removed[start] or region[start] >= 0:
                continue
            region[start] = start
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in tree[x]:
                    if not removed[y] and region[y] < 0:
                        region[y] = start
                        queue.append(y)
        cls = [
            region[node_of[x]] if node_of[x] >= 0 and not removed[node_of[x]] else size + x
            for x in range(n)
        ]

        self._node_of = node_of
        self._parent = parent
        self._depth = depth
        self._rep = rep
        self._removed = removed
        self._joined_by = joined_by
        self.comp = np.asarray(comp, dtype=np.int64)
        self.cls = np.asarray(cls, dtype=np.int64)
        self.joined = np.asarray(sorted(a * n + b for a, b in joined_by), dtype=np.int64)

    @cached_property
    def allowed(self) -> set:
        return {f for f, col in enumerate(self._colors) if col != self.color}

    def covering_edge(self, u: int, v: int) -> Optional[int]:
        """A c-edge e such that some u-v path uses e and no other c-edge, or None."""
        cu, cv = int(self.comp[u]), int(self.comp[v])
        if cu != cv:
            return self._joined_by.get((cu, cv))
        if self.cls[u] == self.cls[v]:
            return None
        x, y = self._node_of[u], self._node_of[v]
        depth, parent = self._depth, self._parent
        while True:
            for node in (x, y):
                if self._removed[node]:
                    return self._rep[node]
            if x == y:
                return None
            if depth[x] >= depth[y]:
                x = parent[x]
            else:
                y = parent[y]

    def path(self, u: int, v: int) -> Optional[List[int]]:
        e = self.covering_edge(u, v)
        if e is None:
            return None
        return path_through_edge(self.graph, self.allowed, e, u, v)


def _color_covers(G: Graph, coloring: EdgeColoring) -> List[_ColorCover]:
    return [_ColorCover(G, coloring.colors, c) for c, _ in _color_order(coloring)]


def exists_conflict_free_path(G: Graph, coloring: EdgeColoring, u: int, v: int) -> Optional[List[int]]:
    """A conflict-free u-v path as a vertex list, or None when none exists (exhaustive)."""
    if u == v:
        raise InputError("endpoints of a conflict-free path must differ")
    for x in (u, v):
        if not 0 <= x < G.n:
            raise InputError(f"vertex {x} outside 0..{G.n - 1}")
    if G.has_edge(u, v):
        return [u, v]
    for c, _ in _color_order(coloring):
        path = _ColorCover(G, coloring.colors, c).path(u, v)
        if path is not None:
            return path
    return None


# ---- certification ----

_PAIR_BLOCK = 1 << 18


def _uncovered_pairs(n: int, covers: Sequence[_ColorCover]) -> Tuple[int, Optional[VertexPair]]:
    """Count of pairs u < v left uncovered by every color, and the first of them."""
    rows = max(1, _PAIR_BLOCK // max(n, 1))
    cols = np.arange(n)
    count = 0
    first: Optional[VertexPair] = None
    for r0 in range(0, n, rows):
        r1 = min(n, r0 + rows)
        open_pairs = cols[None, :] > np.arange(r0, r1)[:, None]
        for cover in covers:
            same = cover.cls[r0:r1, None] == cover.cls[None, :]
            lonely = open_pairs & (cover.comp[r0:r1, None] != cover.comp[None, :])
            if cover.joined.size:
                ri, ci = np.nonzero(lonely)
                keys = cover.comp[r0 + ri] * n + cover.comp[ci]
                lonely[ri, ci] = ~np.isin(keys, cover.joined)
            open_pairs &= same | lonely
            if not open_pairs.any():
                break
        hits = np.argwhere(open_pairs)
        if hits.size:
            count += len(hits)
            if first is None:
                first = (r0 + int(hits[0, 0]), int(hits[0, 1]))
    return count, first


def _witness(G: Graph, coloring: EdgeColoring, covers: Sequence[_ColorCover], u: int, v: int) -> Tuple[int, ...]:
    path: Optional[List[int]] = [u, v] if G.has_edge(u, v) else None
    for cover in covers:
        if path is not None:
            break
        path = cover.path(u, v)
    assert path is not None, f"pair ({u}, {v}) counted as covered but no path found"
    assert is_conflict_free_path(coloring, edge_path(G, path)), f"witness {path} is not conflict-free"
    return tuple(path)


def is_conflict_free_connected(
    G: Graph,
    coloring: EdgeColoring,
    *,
    store_witnesses: bool | None = None,
    seed: int = 0,
) -> CfcCertificate:
    """
    Certify that every pair of distinct vertices has a conflict-free path, or refute
    with the lexicographically first pair that has none.

    With `store_witnesses` None, all witness paths are kept for n up to the
    configured limit; above it (or when False) only a seeded sample is built.
    Every stored witness is re-validated against the coloring.
    """
    if coloring.graph is not G and coloring.graph != G:
        raise InputError("coloring belongs to a different graph")
    if not is_connected(G):
        raise InputError("conflict-free connectivity is only defined for connected graphs")
    n = G.n
    total_pairs = n * (n - 1) // 2
    covers = _color_covers(G, coloring)
    uncovered, first = _uncovered_pairs(n, covers)
    if first is not None:
        log_event("cfc.refuted", level="debug", n=n, m=G.m, pair=list(first), uncovered=uncovered)
        return CfcCertificate(
            status="refuted",
            failing_pair=first,
            witness_count=total_pairs - uncovered,
        )

    cfg = get_config()
    keep_all = (n <= cfg.cfc_witness_store_limit) if store_witnesses is None else bool(store_witnesses)
    witnesses: Dict[VertexPair, Tuple[int, ...]] = {}
    if keep_all:
        for u, v in G.iter_pairs():
            witnesses[(u, v)] = _witness(G, coloring, covers, u, v)
    elif total_pairs:
        rng = substream(seed, n, G.m)
        target = min(cfg.cfc_sampled_witnesses, total_pairs)
        while len(witnesses) < target:
            u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
            pair = (min(u, v), max(u, v))
            if pair not in witnesses:
                witnesses[pair] = _witness(G, coloring, covers, pair[0], pair[1])
        witnesses = dict(sorted(witnesses.items()))
    return CfcCertificate(
        status="certified",
        witnesses=witnesses,
        witness_count=total_pairs,
        witnesses_sampled=not keep_all,
    )


def certificate_to_dict(cert: CfcCertificate, limit: int | None = None) -> Dict[str, Any]:
    """{status, failing_pair?, witness_count, sampled_witnesses[]} with at most `limit` witnesses."""
    cap = get_config().cfc_sampled_witnesses if limit is None else limit
    payload: Dict[str, Any] = {"status": cert.status, "witness_count": cert.witness_count}
    if cert.failing_pair is not None:
        payload["failing_pair"] = list(cert.failing_pair)
    payload["sampled_witnesses"] = [
        {"pair": list(pair), "path": list(path)} for pair, path in list(cert.witnesses.items())[:cap]
    ]
    return payload


# ---- coloring file format ----

def format_coloring(coloring: EdgeColoring) -> str:
    rows = [f"{len(coloring.colors)} {coloring.palette_size}"]
    rows.extend(f"{eid} {c}" for eid, c in enumerate(coloring.colors))
    return "\n".join(rows) + "\n"


def parse_coloring(text: str, G: Graph) -> EdgeColoring:
    """Header "m t", then one "edge_id color" line per edge of G, each id exactly once."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InputError("line 1: missing 'm t' header")

    def pair(lineno: int, raw: str, what: str) -> Tuple[int, int]:
        parts = raw.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected '{what}', got {raw.strip()!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: expected two integers for '{what}', got {raw.strip()!r}") from None

    m, t = pair(1, lines[0], "m t")
    if m != G.m:
        raise InputError(f"line 1: coloring covers {m} edges, graph has {G.m}")
    if t < 1:
        raise InputError(f"line 1: palette size must be >= 1, got {t}")
    if len(lines) - 1 != m:
        raise InputError(f"line 1: header announces {m} edges, file has {len(lines) - 1}")
    colors: List[Optional[int]] = [None] * m
    for lineno, raw in enumerate(lines[1:], start=2):
        eid, c = pair(lineno, raw, "edge_id color")
        if not 0 <= eid < m:
            raise InputError(f"line {lineno}: edge id {eid} outside 0..{m - 1}")
        if colors[eid] is not None:
            raise InputError(f"line {lineno}: edge {eid} colored twice")
        if not 1 <= c <= t:
            raise InputError(f"line {lineno}: color {c} outside 1..{t}")
        colors[eid] = c
    return EdgeColoring(G, [int(c) for c in colors if c is not None], palette_size=t)


def read_coloring(path: str | Path, G: Graph) -> EdgeColoring:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read coloring {path}: {exc}") from None
    return parse_coloring(text, G)


def write_coloring(coloring: EdgeColoring, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_coloring(coloring), encoding="utf-8")
