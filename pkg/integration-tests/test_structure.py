# integration-tests/test_structure.py
from __future__ import annotations

import random
import sys
from pathlib import Path
from typing import Tuple

sys.path.insert(0, str(Path(__file__).resolve().parent))
import support  # noqa: E402

support.bootstrap_test_env()

import networkx as nx  # noqa: E402
from hypothesis import given, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

from src.graph import build_graph  # noqa: E402
from src.interfaces import InputError  # noqa: E402
from src.random_graphs import gen_gnp, threshold_p  # noqa: E402
from src.structure import (  # noqa: E402
    biconnected_blocks,
    bfs_distances,
    check_expander_sampled,
    check_prop1_sampled,
    check_prop2,
    cjv_condition,
    classify_vertices,
    expansion_deficit,
    find_bridges,
    is_connected,
    is_two_connected,
    is_two_edge_connected,
)


@st.composite
def small_graphs(draw, max_n: int = 8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, chosen)


def two_triangles_bridged():
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def test_connectivity_examples() -> Tuple[bool, str]:
    if not is_connected(support.path_graph(4)):
        return False, "P4 should be connected"
    if is_connected(build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])):
        return False, "two disjoint triangles reported connected"
    if not is_connected(build_graph(0, [])) or not is_connected(build_graph(1, [])):
        return False, "n=0 and n=1 count as connected"
    return True, "P4, two triangles, trivial graphs"


def test_bridge_examples() -> Tuple[bool, str]:
    P4 = support.path_graph(4)
    if find_bridges(P4).bridges != frozenset(range(3)):
        return False, "P4 should have 3 bridges"
    if find_bridges(support.cycle_graph(5)).bridges:
        return False, "C5 has no bridges"
    G = two_triangles_bridged()
    cut = find_bridges(G)
    if cut.bridges != frozenset({G.edge_id(2, 3)}):
        return False, f"bridged triangles: {cut.bridges}"
    if cut.articulation_points != frozenset({2, 3}):
        return False, f"articulation points {cut.articulation_points}"
    if cut.cut_edge_subgraph.edges != ((2, 3),):
        return False, "cut-edge subgraph should hold exactly the bridge"
    return True, "P4, C5, bridged triangles"


def test_bridges_match_removal_oracle() -> Tuple[bool, str]:
    rng = random.Random(2024)
    checked = 0
    while checked < 500:
        n = rng.randint(2, 10)
        G = gen_gnp(n, rng.uniform(0.1, 0.8), rng.getrandbits(32))
        if G.m > 20:
            continue
        if find_bridges(G).bridges != support.bridges_by_removal(G):
            return False, f"mismatch on {G.edges}"
        checked += 1
    return True, "500 random graphs with m <= 20 agree with edge removal"


def test_blocks_and_articulation_match_networkx() -> Tuple[bool, str]:
    rng = random.Random(7)
    for _ in range(200):
        G = gen_gnp(rng.randint(2, 12), rng.uniform(0.1, 0.6), rng.getrandbits(32))
        H = support.to_networkx(G)
        expected = sorted(sorted(G.edge_id(u, v) for u, v in comp) for comp in nx.biconnected_component_edges(H))
        if biconnected_blocks(G) != expected:
            return False, f"blocks differ on {G.edges}"
        if set(find_bridges(G).articulation_points) != set(nx.articulation_points(H)):
            return False, f"articulation points differ on {G.edges}"
    return True, "blocks and articulation points agree with networkx on 200 graphs"


def test_two_connectivity_examples() -> Tuple[bool, str]:
    C4 = support.cycle_graph(4)
    K4_minus = build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    bowtie = build_graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    cases = [
        (is_two_edge_connected(C4), True, "C4 2-edge-connected"),
        (is_two_edge_connected(support.path_graph(3)), False, "P3 not 2-edge-connected"),
        (is_two_edge_connected(K4_minus), True, "K4-e 2-edge-connected"),
        (is_two_connected(C4), True, "C4 2-connected"),
        (is_two_connected(bowtie), False, "bowtie not 2-connected"),
        (is_two_connected(support.complete_graph(4)), True, "K4 2-connected"),
        (is_two_connected(support.complete_graph(2)), False, "K2 needs n >= 3"),
    ]
    for got, want, label in cases:
        if got != want:
            return False, label
    return True, "C4, P3, K4-e, bowtie, K4"


def test_cjv_examples() -> Tuple[bool, str]:
    if not cjv_condition(support.cycle_graph(5)):
        return False, "C5 vacuous"
    pendant_triangle = build_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    if not cjv_condition(pendant_triangle):
        return False, "triangle plus pendant should pass"
    if cjv_condition(support.path_graph(3)):
        return False, "P3 has two bridges sharing a vertex"
    try:
        cjv_condition(build_graph(4, [(0, 1), (2, 3)]))
    except InputError:
        return True, "C5, pendant triangle, P3, disconnected rejected"
    return False, "disconnected graph accepted"


def test_partition_examples() -> Tuple[bool, str]:
    K10 = support.complete_graph(10)
    part = classify_vertices(K10)
    if part.small or abs(part.threshold - 0.2303) > 1e-3:
        return False, f"K10 partition {part}"
    hub = build_graph(30000, [(0, 1), (0, 2)])
    part = classify_vertices(hub)
    if 1 not in part.small or 0 not in part.large:
        return False, "degree-1 vertex at n=30000 should be small, the hub large"
    iso = build_graph(5, [(0, 1), (1, 2)])
    if 4 not in classify_vertices(iso).small:
        return False, "isolated vertex should be small"
    tie = classify_vertices(support.cycle_graph(5), threshold=2.0)
    if tie.small:
        return False, "degree equal to the threshold must be large"
    return True, "K10, n=30000 leaf, isolated vertex, tie goes large"


def test_small_vertex_examples() -> Tuple[bool, str]:
    K10 = support.complete_graph(10)
    report = check_prop2(K10, classify_vertices(K10))
    if not report.passed:
        return False, "empty V1 should pass all three checks"
    hub = build_graph(30000, [(0, 1), (0, 2)])
    report = check_prop2(hub, classify_vertices(hub))
    if report.small_distance.passed or report.small_distance.witnesses != [[1, 2]]:
        return False, f"distance check witnesses {report.small_distance.witnesses}"
    if report.size_bound.passed:
        return False, "29999 small vertices exceed n^0.4"
    return True, "vacuous pass and the shared-hub witness"


def test_small_distance_matches_bfs() -> Tuple[bool, str]:
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(10, 40)
        G = gen_gnp(n, rng.uniform(0.02, 0.15), rng.getrandbits(32))
        part = classify_vertices(G, threshold=rng.choice([1, 2, 3]))
        small = sorted(part.small)
        if len(small) > 50:
            continue
        close = []
        for i, u in enumerate(small):
            dist = bfs_distances(G, u, limit=2)
            close.extend((u, v) for v in small[i + 1:] if v in dist)
        report = check_prop2(G, part)
        if report.small_distance.passed != (not close):
            return False, f"distance check disagrees with BFS on {G.edges}"
        if report.small_distance.violations != len(close):
            return False, "violation count differs from BFS pair count"
    return True, "part (2) equals BFS distance >= 3 on random graphs"


def test_expansion_examples() -> Tuple[bool, str]:
    empty = build_graph(100, [])
    report = check_prop1_sampled(empty, threshold_p(100, 0), 50, 1)
    if report.sparse_subsets.violations != 0 or not report.sparse_subsets.applicable:
        return False, "empty graph part (1) should have zero violations"
    if report.cross_edges.applicable:
        return False, "n=100 is too small for part (2)"
    K = support.complete_graph(76)
    report = check_prop1_sampled(K, threshold_p(76, 0), 20, 1)
    if report.sparse_subsets.violations == 0:
        return False, "K76 part (1) should find violations"
    tiny = check_prop1_sampled(support.complete_graph(10), 0.5, 5, 0)
    if tiny.sparse_subsets.applicable or tiny.cross_edges.applicable:
        return False, "n < 16 must be not applicable"
    doc = report.sparse_subsets.to_dict()
    if not {"check_name", "pass", "witnesses", "sampled", "trials"} <= set(doc):
        return False, f"report keys {sorted(doc)}"
    return True, "empty graph, K76, small-n guard, report shape"


def test_expansion_reproducible() -> Tuple[bool, str]:
    G = gen_gnp(400, threshold_p(400, 2), 5)
    a = check_prop1_sampled(G, threshold_p(400, 2), 30, 9)
    b = check_prop1_sampled(G, threshold_p(400, 2), 30, 9)
    if a.sparse_subsets.to_dict() != b.sparse_subsets.to_dict() or a.cross_edges.to_dict() != b.cross_edges.to_dict():
        return False, "same seed gave different reports"
    return True, "equal seeds give equal reports"


def test_expander_examples() -> Tuple[bool, str]:
    K = support.complete_graph(20)
    if not check_expander_sampled(K, 5, 2, 100, 3).passed:
        return False, "K20 with k=n/4, c=2 cannot violate"
    P10 = support.path_graph(10)
    if expansion_deficit(P10, {4}, 2) != 0:
        return False, "single inner path vertex has exactly 2 neighbors"
    if expansion_deficit(P10, {3, 4, 5}, 2) >= 0:
        return False, "three consecutive inner vertices must violate"
    C6 = support.cycle_graph(6)
    if expansion_deficit(C6, {0}, 2) < 0 or expansion_deficit(C6, {0, 1}, 2) >= 0:
        return False, "C6 singletons pass, adjacent pairs fail"
    report = check_expander_sampled(C6, 2, 2, 50, 1)
    if report.passed or not report.sampled:
        return False, "C6 sampled check should refute"
    if report.to_dict().get("evidence_only") is not False:
        return False, "refutation should not be marked evidence-only"
    try:
        check_expander_sampled(C6, 0, 2, 5, 1)
    except InputError:
        return True, "K20 pass, P10 and C6 refutations, k >= 1 enforced"
    return False, "k=0 accepted"


def test_structural_properties() -> Tuple[bool, str]:
    @settings(max_examples=200, deadline=None)
    @given(small_graphs(), st.floats(min_value=0.0, max_value=5.0))
    def prop(G, threshold) -> None:
        if is_connected(G) and G.n >= 3 and is_two_connected(G):
            assert is_two_edge_connected(G)
        if is_two_edge_connected(G):
            assert cjv_condition(G)
        if G.n >= 2:
            part = classify_vertices(G, threshold=threshold)
            assert part.small | part.large == frozenset(range(G.n))
            assert not part.small & part.large
        assert is_connected(G) == support.connected_by_search(G.n, G.edges)

    prop()
    return True, "2-connected => 2-edge-connected, cjv vacuous, partition is a partition"


def main() -> int:
    checks = [
        ("connectivity examples", test_connectivity_examples),
        ("bridge examples", test_bridge_examples),
        ("bridges vs removal oracle", test_bridges_match_removal_oracle),
        ("blocks vs networkx", test_blocks_and_articulation_match_networkx),
        ("2-connectivity examples", test_two_connectivity_examples),
        ("cjv examples", test_cjv_examples),
        ("partition examples", test_partition_examples),
        ("small-vertex examples", test_small_vertex_examples),
        ("small-vertex distance vs BFS", test_small_distance_matches_bfs),
        ("expansion examples", test_expansion_examples),
        ("expansion reproducible", test_expansion_reproducible),
        ("expander examples", test_expander_examples),
        ("structural properties", test_structural_properties),
    ]
    return support.run_checks(checks)


if __name__ == "__main__":
    raise SystemExit(main())
