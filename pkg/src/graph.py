"""
Simple undirected graphs with dense, stable edge ids.

Edges are stored as (u, v) with u < v in first-occurrence order; edge ids are
their positions. Adjacency lists are sorted by neighbor id and carry the
incident edge id, so colorings can be flat arrays indexed by edge id.
"""
from __future__ import annotations

from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Set, Tuple

import numpy as np

from .interfaces import InputError

Edge = Tuple[int, int]
Incidence = Tuple[int, int]  # (neighbor, edge_id)


class Graph:
    """Immutable after construction; safe to share between threads and to pickle into workers."""

    def __init__(self, n: int, edges: Sequence[Edge]) -> None:
        self._n = int(n)
        self._edges: Tuple[Edge, ...] = tuple(edges)
        adjacency: List[List[Incidence]] = [[] for _ in range(self._n)]
        index: Dict[Edge, int] = {}
        for eid, (u, v) in enumerate(self._edges):
            adjacency[u].append((v, eid))
            adjacency[v].append((u, eid))
            index[(u, v)] = eid
        self._adjacency: Tuple[Tuple[Incidence, ...], ...] = tuple(tuple(sorted(row)) for row in adjacency)
        self._index = index

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    def edge(self, eid: int) -> Edge:
        return self._edges[eid]

    def incident(self, v: int) -> Tuple[Incidence, ...]:
        return self._adjacency[v]

    def neighbors(self, v: int) -> List[int]:
        return [w for w, _ in self._adjacency[v]]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def degree_sequence(self) -> List[int]:
        return [len(row) for row in self._adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[(min(u, v), max(u, v))]
        except KeyError:
            raise InputError(f"no edge between {u} and {v}") from None

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    @cached_property
    def edge_array(self) -> np.ndarray:
        """(m, 2) int array of endpoints, for vectorised set queries."""
        if not self._edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self._edges, dtype=np.int64)

    # ---- vertex-set queries (views, nothing stored) ----

    def _mask(self, vertices: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self._n, dtype=bool)
        idx = np.fromiter((int(v) for v in vertices), dtype=np.int64)
        if idx.size:
            mask[idx] = True
        return mask

    def edges_within(self, S: Iterable[int]) -> int:
        """e(S): number of edges of the induced subgraph G[S]."""
        if not self._edges:
            return 0
        mask = self._mask(S)
        ends = self.edge_array
        return int(np.count_nonzero(mask[ends[:, 0]] & mask[ends[:, 1]]))

    def edges_between(self, X: Iterable[int], Y: Iterable[int]) -> int:
        """e(X, Y): edges with one endpoint in X and the other in Y (X, Y disjoint)."""
        if not self._edges:
            return 0
        mx = self._mask(X)
        my = self._mask(Y)
        ends = self.edge_array
        a, b = ends[:, 0], ends[:, 1]
        return int(np.count_nonzero((mx[a] & my[b]) | (my[a] & mx[b])))

    def neighborhood(self, U: Iterable[int], S: Iterable[int] | None = None) -> Set[int]:
        """N(U, S): vertices of S outside U adjacent to some vertex of U; S defaults to V."""
        members = set(U)
        allowed = None if S is None else set(S)
        out: Set[int] = set()
        for u in members:
            for w, _ in self._adjacency[u]:
                if w in members:
                    continue
                if allowed is not None and w not in allowed:
                    continue
                out.add(w)
        return out

    def degree_within(self, v: int, S: Iterable[int]) -> int:
        """d_S(v) = |N(v) ∩ S|."""
        allowed = S if isinstance(S, (set, frozenset)) else set(S)
        return sum(1 for w, _ in self._adjacency[v] if w in allowed)

    # ---- derived graphs ----

    def induced_subgraph(self, S: Iterable[int]) -> Tuple["Graph", Tuple[int, ...]]:
        """G[S] relabelled 0..|S|-1 in ascending order of original ids; returns (H, labels)."""
        labels = tuple(sorted(set(S)))
        local = {v: i for i, v in enumerate(labels)}
        sub_edges = [(local[u], local[v]) for u, v in self._edges if u in local and v in local]
        return Graph(len(labels), sub_edges), labels

    def spanning_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Same vertex set, edges restricted to `edge_ids` (kept in ascending id order)."""
        return Graph(self._n, [self._edges[eid] for eid in sorted(set(edge_ids))])

    def iter_pairs(self) -> Iterator[Edge]:
        for u in range(self._n):
            for v in range(u + 1, self._n):
                yield (u, v)


def build_graph(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validate and deduplicate `edge_list`; ids follow first occurrence."""
    try:
        n = int(n)
    except (TypeError, ValueError):
        raise InputError(f"vertex count must be an integer, got {n!r}") from None
    if n < 0:
        raise InputError(f"vertex count must be non-negative, got {n}")
    seen: Set[Edge] = set()
    edges: List[Edge] = []
    for pair in edge_list:
        if len(pair) != 2:
            raise InputError(f"edge must be a vertex pair, got {pair!r}")
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        edges.append(key)
    return Graph(n, edges)


# ---- edge-list text format ----

def _parse_int_pair(line: str, lineno: int, what: str) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise InputError(f"line {lineno}: expected '{what}', got {line.strip()!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(f"line {lineno}: expected two integers for '{what}', got {line.strip()!r}") from None


def parse_edge_list(text: str) -> Graph:
    """Header "n m", then m lines "u v" (0-indexed)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InputError("line 1: missing 'n m' header")
    n, m = _parse_int_pair(lines[0], 1, "n m")
    if n < 0 or m < 0:
        raise InputError(f"line 1: negative counts in header {lines[0].strip()!r}")
    body = lines[1:]
    if len(body) != m:
        raise InputError(f"line 1: header announces {m} edges, file has {len(body)}")
    pairs: List[Edge] = []
    for offset, raw in enumerate(body, start=2):
        u, v = _parse_int_pair(raw, offset, "u v")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"line {offset}: vertex out of range 0..{n - 1} in {raw.strip()!r}")
        if u == v:
            raise InputError(f"line {offset}: self-loop {raw.strip()!r}")
        pairs.append((u, v))
    return build_graph(n, pairs)


def format_edge_list(G: Graph) -> str:
    rows = [f"{G.n} {G.m}"]
    rows.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(rows) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read edge list {path}: {exc}") from None
    return parse_edge_list(text)


def write_edge_list(G: Graph, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_edge_list(G), encoding="utf-8")
