from __future__ import annotations

import os
import sys
from collections import Counter
from itertools import permutations, product
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

PROJECT_ROOT = Path(__file__).resolve().parents[1]

Check = Tuple[str, Callable[[], Tuple[bool, str]]]


def ensure_project_root() -> Path:
    os.chdir(PROJECT_ROOT)
    if str(PROJECT_ROOT) not in sys.path:
        sys.path.insert(0, str(PROJECT_ROOT))
    return PROJECT_ROOT


def bootstrap_test_env() -> Path:
    # keep test runs out of the run log unless a test opts in
    os.environ.setdefault("APP_ENABLE_JSONL_LOGS", "0")
    os.environ.setdefault("LOG_LEVEL", "error")
    return ensure_project_root()


def run_checks(checks: Sequence[Check]) -> int:
    ok_all = True
    for name, fn in checks:
        try:
            ok, msg = fn()
        except Exception as exc:
            ok, msg = False, f"error: {type(exc).__name__}: {exc}"
        status = "OK" if ok else "FAIL"
        print(f"[ {status} ] {name}: {msg}")
        ok_all = ok_all and ok
    return 0 if ok_all else 1


# ---- named graphs ----

def cycle_graph(n: int):
    from src.graph import build_graph

    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int):
    from src.graph import build_graph

    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int):
    from src.graph import build_graph

    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def from_networkx(H):
    from src.graph import build_graph

    relabel = {v: i for i, v in enumerate(sorted(H.nodes()))}
    return build_graph(len(relabel), [(relabel[u], relabel[v]) for u, v in H.edges()])


def to_networkx(G):
    import networkx as nx

    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    return H


# ---- brute-force oracles (independent of the code under test) ----

def simple_paths(G, u: int, v: int) -> List[List[int]]:
    """Every simple u-v path as a list of edge ids, by plain DFS."""
    found: List[List[int]] = []

    def walk(x: int, seen: set, edges: List[int]) -> None:
        if x == v:
            found.append(list(edges))
            return
        for w in sorted(G.neighbors(x)):
            if w in seen:
                continue
            seen.add(w)
            edges.append(G.edge_id(x, w))
            walk(w, seen, edges)
            edges.pop()
            seen.discard(w)

    walk(u, {u}, [])
    return found


def naive_pair_ok(G, colors: Sequence[int], u: int, v: int) -> bool:
    for path in simple_paths(G, u, v):
        counts = Counter(colors[e] for e in path)
        if any(k == 1 for k in counts.values()):
            return True
    return False


def naive_first_failing_pair(G, colors: Sequence[int]) -> Optional[Tuple[int, int]]:
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if not naive_pair_ok(G, colors, u, v):
                return (u, v)
    return None


def brute_force_cfc(G, max_k: int = 4) -> int:
    """Smallest k such that some coloring in {1..k}^m is conflict-free connected."""
    pair_paths: Dict[Tuple[int, int], List[List[int]]] = {
        (u, v): simple_paths(G, u, v) for u in range(G.n) for v in range(u + 1, G.n)
    }
    for k in range(1, max_k + 1):
        for colors in product(range(1, k + 1), repeat=G.m):
            good = True
            for paths in pair_paths.values():
                if not any(any(c == 1 for c in Counter(colors[e] for e in p).values()) for p in paths):
                    good = False
                    break
            if good:
                return k
    raise AssertionError(f"no coloring with <= {max_k} colors")


def connected_by_search(n: int, edges: Sequence[Tuple[int, int]]) -> bool:
    if n <= 1:
        return True
    adj: Dict[int, List[int]] = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for w in adj[x]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def bridges_by_removal(G) -> set:
    """Edge ids whose removal increases the number of components."""
    def components(edges: Sequence[Tuple[int, int]]) -> int:
        parent = list(range(G.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            parent[find(a)] = find(b)
        return len({find(x) for x in range(G.n)})

    base = components(G.edges)
    return {eid for eid in range(G.m) if components([e for i, e in enumerate(G.edges) if i != eid]) > base}


def hamiltonian_by_permutations(G) -> bool:
    if G.n < 3:
        return False
    for rest in permutations(range(1, G.n)):
        order = (0,) + rest
        if rest[0] > rest[-1]:
            continue
        if all(G.has_edge(order[i], order[(i + 1) % G.n]) for i in range(G.n)):
            return True
    return False
