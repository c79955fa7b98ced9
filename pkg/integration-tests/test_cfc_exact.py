# integration-tests/test_cfc_exact.py
from __future__ import annotations

import random
import sys
from pathlib import Path
from typing import Tuple

sys.path.insert(0, str(Path(__file__).resolve().parent))
import support  # noqa: E402

support.bootstrap_test_env()

import networkx as nx  # noqa: E402

from src.cfc import is_conflict_free_connected  # noqa: E402
from src.coloring import cfc_exact  # noqa: E402
from src.graph import build_graph  # noqa: E402
from src.interfaces import BudgetExceeded, InputError  # noqa: E402
from src.random_graphs import gen_gnp  # noqa: E402
from src.structure import cjv_condition, is_connected, is_two_connected  # noqa: E402


def _atlas(max_n: int):
    for H in nx.graph_atlas_g():
        if 2 <= H.number_of_nodes() <= max_n and nx.is_connected(H):
            yield support.from_networkx(H)


def test_named_graphs() -> Tuple[bool, str]:
    cases = [(support.complete_graph(n), 1) for n in (3, 4, 5)]
    cases += [(support.cycle_graph(n), 2) for n in (4, 5, 6, 7)]
    cases += [(support.path_graph(3), 2), (support.path_graph(4), 2), (support.path_graph(8), 3)]
    for G, want in cases:
        res = cfc_exact(G)
        if res.value != want:
            return False, f"{G} gave {res.value}, expected {want}"
        if not is_conflict_free_connected(G, res.coloring).certified:
            return False, f"{G}: returned coloring is not conflict-free connected"
        if res.coloring.palette_size != want:
            return False, f"{G}: palette {res.coloring.palette_size}"
    if support.brute_force_cfc(support.path_graph(8)) != 3:
        return False, "brute force disagrees on P8"
    return True, "K3-K5 = 1, C4-C7 = 2, P3 = P4 = 2, P8 = 3"


def test_matches_brute_force() -> Tuple[bool, str]:
    rng = random.Random(8)
    checked = 0
    while checked < 25:
        G = gen_gnp(rng.randint(3, 7), rng.uniform(0.3, 0.7), rng.getrandbits(32))
        if not is_connected(G) or G.m > 7:
            continue
        got = cfc_exact(G).value
        want = support.brute_force_cfc(G, max_k=G.m)
        if got != want:
            return False, f"{G.edges}: exact {got}, brute force {want}"
        checked += 1
    return True, "25 random graphs with m <= 7 agree with brute force"


def test_one_iff_complete() -> Tuple[bool, str]:
    count = 0
    for G in _atlas(5):
        if (cfc_exact(G).value == 1) != G.is_complete():
            return False, f"{G.edges}: cfc 1 but complete={G.is_complete()}"
        count += 1
    return True, f"{count} connected graphs on 2-5 vertices"


def test_cut_edge_condition_gives_two() -> Tuple[bool, str]:
    count = 0
    for G in _atlas(6):
        if G.is_complete() or not cjv_condition(G):
            continue
        value = cfc_exact(G).value
        if value > 2:
            return False, f"{G.edges} satisfies the cut-edge condition but needs {value} colors"
        count += 1
    return True, f"{count} noncomplete graphs on <= 6 vertices, no counterexample"


def test_two_connected_gives_two() -> Tuple[bool, str]:
    count = 0
    for G in _atlas(6):
        if G.is_complete() or not is_two_connected(G) or G.m > 14:
            continue
        if cfc_exact(G).value != 2:
            return False, f"{G.edges}: 2-connected and noncomplete but cfc != 2"
        count += 1
    return True, f"{count} 2-connected noncomplete graphs"


def _random_spanning_subgraph(G, rng: random.Random):
    """A spanning tree grown from a random root, plus each remaining edge with probability 1/3."""
    order = list(range(G.m))
    rng.shuffle(order)
    parent = list(range(G.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = []
    for eid in order:
        a, b = (find(x) for x in G.edge(eid))
        if a != b:
            parent[a] = b
            keep.append(eid)
        elif rng.random() < 1 / 3:
            keep.append(eid)
    return G.spanning_subgraph(keep)


def test_monotone_under_spanning_subgraphs() -> Tuple[bool, str]:
    rng = random.Random(606)
    pairs = 0
    while pairs < 100:
        G = gen_gnp(rng.randint(4, 7), rng.uniform(0.4, 0.8), rng.getrandbits(32))
        if not is_connected(G) or G.m > 12:
            continue
        sub = _random_spanning_subgraph(G, rng)
        whole = cfc_exact(G, max_k=G.m).value
        part = cfc_exact(sub, max_k=max(1, sub.m)).value
        if whole > part:
            return False, f"cfc(G)={whole} > cfc(G')={part} for {G.edges} / {sub.edges}"
        pairs += 1
    return True, "100 (G, spanning G') pairs with m <= 12"


def test_refusals() -> Tuple[bool, str]:
    try:
        cfc_exact(support.cycle_graph(16))
    except BudgetExceeded:
        pass
    else:
        return False, "C16 exceeds the default edge budget"
    try:
        cfc_exact(support.cycle_graph(5), edge_budget=3)
    except BudgetExceeded:
        pass
    else:
        return False, "explicit edge budget ignored"
    try:
        cfc_exact(support.path_graph(8), max_k=2)
    except BudgetExceeded:
        pass
    else:
        return False, "P8 cannot be done with 2 colors"
    for bad in (build_graph(1, []), build_graph(4, [(0, 1), (2, 3)])):
        try:
            cfc_exact(bad)
        except InputError:
            continue
        return False, f"{bad} accepted"
    return True, "edge budget, palette bound, n < 2 and disconnected"


def main() -> int:
    checks = [
        ("named graphs", test_named_graphs),
        ("exact vs brute force", test_matches_brute_force),
        ("cfc = 1 iff complete", test_one_iff_complete),
        ("cut-edge condition", test_cut_edge_condition_gives_two),
        ("2-connected graphs", test_two_connected_gives_two),
        ("monotonicity", test_monotone_under_spanning_subgraphs),
        ("refusals", test_refusals),
    ]
    return support.run_checks(checks)


if __name__ == "__main__":
    raise SystemExit(main())
