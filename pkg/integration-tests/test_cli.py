# integration-tests/test_cli.py
from __future__ import annotations

import io
import json
import sys
import tempfile
from pathlib import Path
from typing import List, Tuple

sys.path.insert(0, str(Path(__file__).resolve().parent))
import support  # noqa: E402

support.bootstrap_test_env()

from src.graph import format_edge_list, write_edge_list  # noqa: E402
from src.main import dispatch  # noqa: E402


def _run(argv: List[str], stdin: str = "") -> Tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_cfc_on_cycle() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "c5.txt"
        write_edge_list(support.cycle_graph(5), path)
        code, out, err = _run(["cfc", str(path)])
    if (code, out) != (0, "2\n"):
        return False, f"exit {code}, stdout {out!r}, stderr {err!r}"
    code, out, _ = _run(["cfc", "-"], stdin=format_edge_list(support.complete_graph(4)))
    if (code, out) != (0, "1\n"):
        return False, f"K4 from stdin: exit {code}, stdout {out!r}"
    code, _, err = _run(["cfc", "-", "--budget", "3"], stdin=format_edge_list(support.cycle_graph(5)))
    if code != 3 or "budget" not in err:
        return False, f"budget refusal exit {code}, stderr {err!r}"
    return True, "C5 -> 2, K4 from stdin -> 1, budget refusal exits 3"


def test_check_refuted_path() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        graph = Path(tmp) / "p3.txt"
        coloring = Path(tmp) / "p3.col"
        write_edge_list(support.path_graph(3), graph)
        coloring.write_text("2 1\n0 1\n1 1\n", encoding="utf-8")
        code, out, _ = _run(["check", str(graph), "--coloring", str(coloring)])
    if code != 1:
        return False, f"expected exit 1, got {code}"
    doc = json.loads(out)
    if doc["status"] != "refuted" or doc["failing_pair"] != [0, 2]:
        return False, f"certificate {doc}"
    return True, "P3 with one color refuted at (0, 2)"


def test_gen_complete() -> Tuple[bool, str]:
    code, out, _ = _run(["gen", "--model", "gnp", "--n", "5", "--p", "1.0", "--seed", "4"])
    lines = out.splitlines()
    if code != 0 or lines[0] != "5 10" or len(lines) != 11:
        return False, f"exit {code}, output {lines[:3]}"
    code, _, err = _run(["gen", "--model", "gnp", "--n", "5"])
    if code != 2 or "--p" not in err:
        return False, f"missing --p: exit {code}, stderr {err!r}"
    return True, "K5 edge list with 10 edge lines; --p enforced"


def test_usage_errors() -> Tuple[bool, str]:
    code, _, err = _run(["cfc", "graph.txt", "--colour", "3"])
    if code != 2 or "usage:" not in err:
        return False, f"unknown flag: exit {code}, stderr {err!r}"
    code, _, err = _run(["cfc", "no/such/file.txt"])
    if code != 2 or "cannot read" not in err:
        return False, f"missing file: exit {code}, stderr {err!r}"
    code, _, err = _run(["cfc", "-"], stdin="3 1\n0 5\n")
    if code != 2 or "line 2" not in err:
        return False, f"malformed edge list: exit {code}, stderr {err!r}"
    return True, "unknown flag, missing file and malformed input exit 2"


def test_gen_analyze_round_trip() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        graph = Path(tmp) / "g.txt"
        code, _, _ = _run(["gen", "--model", "gnp", "--n", "120", "--p", "0.08", "--seed", "9", "--out", str(graph)])
        if code != 0:
            return False, f"gen exit {code}"
        code, first, _ = _run(["analyze", str(graph), "--trials", "20", "--seed", "1"])
        _, second, _ = _run(["analyze", str(graph), "--trials", "20", "--seed", "1"])
    if code != 0 or first != second:
        return False, f"analyze exit {code} or output not reproducible"
    doc = json.loads(first)
    for key in ("connected", "bridges", "articulation_points", "two_edge_connected", "partition", "small_vertices", "expansion"):
        if key not in doc:
            return False, f"analysis lacks {key}"
    if doc["n"] != 120:
        return False, f"n={doc['n']}"
    return True, f"edge list -> analysis JSON ({doc['m']} edges, connected={doc['connected']})"


def test_color_then_check() -> Tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        graph = Path(tmp) / "c12.txt"
        coloring = Path(tmp) / "c12.col"
        write_edge_list(support.cycle_graph(12), graph)
        code, out, err = _run(["color", str(graph), "--seed", "2", "--out", str(coloring)])
        if code != 0:
            return False, f"color exit {code}: {err}"
        first = coloring.read_text(encoding="utf-8")
        doc = json.loads(out)
        if doc["status"] != "certified" or doc["method"] != "constructive":
            return False, f"color certificate {doc}"
        code, _, _ = _run(["check", str(graph), "--coloring", str(coloring)])
        if code != 0:
            return False, f"check exit {code}"
        _run(["color", str(graph), "--seed", "2", "--out", str(coloring)])
        if coloring.read_text(encoding="utf-8") != first:
            return False, "coloring file not reproducible"
        write_edge_list(support.path_graph(20), graph)
        code, _, _ = _run(["color", str(graph), "--out", str(coloring)])
    if code != 3:
        return False, f"P20 has no 2-coloring, color exited {code}"
    return True, "C12 colored, checked and reproducible; P20 exits 3"


def test_ham_and_experiment() -> Tuple[bool, str]:
    code, out, _ = _run(["ham", "-", "--seed", "1"], stdin=format_edge_list(support.cycle_graph(7)))
    if (code, out) != (0, "0 1 2 3 4 5 6\n"):
        return False, f"C7: exit {code}, stdout {out!r}"
    code, out, _ = _run(["ham", "-"], stdin=format_edge_list(support.path_graph(5)))
    if (code, out) != (1, "NOT FOUND (exact)\n"):
        return False, f"P5: exit {code}, stdout {out!r}"
    with tempfile.TemporaryDirectory() as tmp:
        csv_path = Path(tmp) / "sweep" / "runs.csv"
        argv = ["experiment", "--mode", "offset_a", "--n", "300", "--param", "1", "--trials", "10", "--seed", "7", "--out", str(csv_path)]
        code, out, _ = _run(argv)
        first = csv_path.read_text(encoding="utf-8")
        _, again, _ = _run(argv)
        if code != 0 or csv_path.read_text(encoding="utf-8") != first or out != again:
            return False, "experiment output not reproducible"
        piped_code, piped, _ = _run(argv[:-2] + ["--out", "-"])
        if piped_code != 0 or piped != first:
            return False, "--out - should print the same CSV the file received"
    doc = json.loads(out)
    if doc["spec"]["trials"] != 10 or "fraction_connected" not in doc["aggregates"]:
        return False, f"summary {doc}"
    if len(first.splitlines()) != 11:
        return False, "CSV should have a header plus one row per trial"
    return True, "ham prints the cycle or NOT FOUND; experiment CSV (file or stdout) and summary reproducible"


def main() -> int:
    checks = [
        ("cfc command", test_cfc_on_cycle),
        ("check refutes", test_check_refuted_path),
        ("gen complete graph", test_gen_complete),
        ("usage errors", test_usage_errors),
        ("gen -> analyze", test_gen_analyze_round_trip),
        ("color -> check", test_color_then_check),
        ("ham and experiment", test_ham_and_experiment),
    ]
    return support.run_checks(checks)


if __name__ == "__main__":
    raise SystemExit(main())
