# src/main.py
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from dotenv import load_dotenv

from .cfc import EdgeColoring, certificate_to_dict, format_coloring, is_conflict_free_connected, read_coloring
from .coloring import cfc_exact, cfc_upper
from .config import get_config
from .experiments import csv_text, run_experiment, summary, write_csv
from .graph import Graph, format_edge_list, parse_edge_list, read_edge_list
from .hamilton import hamiltonian_cycle
from .interfaces import BudgetExceeded, ExperimentSpec, GenerationFailure, InputError
from .logging import log_event
from .random_graphs import gen_gnp, gen_random_regular
from .report_format import dumps
from .structure import (
    biconnected_blocks,
    check_expander_sampled,
    check_prop1_sampled,
    check_prop2,
    cjv_condition,
    classify_vertices,
    connected_components,
    find_bridges,
    is_connected,
    is_two_connected,
    is_two_edge_connected,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class _UsageError(Exception):
    def __init__(self, usage: str, message: str) -> None:
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so dispatch() owns the exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(self.format_usage(), message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cfc", description="Conflict-free connection colorings of graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="sample a random graph and write its edge list")
    gen.add_argument("--model", choices=("gnp", "regular"), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, default=None)
    gen.add_argument("--r", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="-", help="output path ('-' for stdout)")

    analyze = sub.add_parser("analyze", help="connectivity, cut structure, partition and sampled checks as JSON")
    analyze.add_argument("graph", help="edge-list path ('-' for stdin)")
    analyze.add_argument("--p", type=float, default=None, help="edge probability for the sampled checks (default: edge density)")
    analyze.add_argument("--trials", type=int, default=None)
    analyze.add_argument("--seed", type=int, default=0)

    ham = sub.add_parser("ham", help="search a Hamiltonian cycle")
    ham.add_argument("graph")
    ham.add_argument("--restarts", type=int, default=None)
    ham.add_argument("--seed", type=int, default=0)

    color = sub.add_parser("color", help="write a certified conflict-free 2-coloring")
    color.add_argument("graph")
    color.add_argument("--seed", type=int, default=0)
    color.add_argument("--out", required=True, help="coloring file to write")

    check = sub.add_parser("check", help="verify a coloring; prints the certificate")
    check.add_argument("graph")
    check.add_argument("--coloring", required=True)

    cfc = sub.add_parser("cfc", help="exact conflict-free connection number of a small graph")
    cfc.add_argument("graph")
    cfc.add_argument("--max-k", type=int, default=None)
    cfc.add_argument("--budget", type=int, default=None)

    exp = sub.add_parser("experiment", help="Monte-Carlo experiment; CSV rows to --out, summary JSON to stdout")
    exp.add_argument("--mode", choices=("offset_a", "alpha", "hamilton_margin", "regular_r", "structure"), required=True)
    exp.add_argument("--n", type=int, required=True)
    exp.add_argument("--param", type=float, required=True)
    exp.add_argument("--trials", type=int, required=True)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--out", required=True)
    exp.add_argument("--jobs", type=int, default=None)
    return parser


def _load_graph(path: str, stdin: TextIO) -> Graph:
    if path == "-":
        return parse_edge_list(stdin.read())
    return read_edge_list(path)


def _emit(text: str, out: str, stdout: TextIO) -> None:
    if out == "-":
        stdout.write(text)
        return
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")


# ---- subcommands ----

def _cmd_gen(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    if args.model == "gnp":
        if args.p is None:
            raise InputError("gen --model gnp needs --p")
        G = gen_gnp(args.n, args.p, args.seed)
    else:
        if args.r is None:
            raise InputError("gen --model regular needs --r")
        G = gen_random_regular(args.n, args.r, args.seed)
    _emit(format_edge_list(G), args.out, stdout)
    return EXIT_OK


def _analysis(G: Graph, p: Optional[float], trials: int, seed: int) -> Dict[str, Any]:
    cut = find_bridges(G)
    connected = is_connected(G)
    report: Dict[str, Any] = {
        "n": G.n,
        "m": G.m,
        "connected": connected,
        "components": len(connected_components(G)),
        "bridges": [list(G.edge(e)) for e in sorted(cut.bridges)],
        "articulation_points": sorted(cut.articulation_points),
        "blocks": len(biconnected_blocks(G)),
        "two_edge_connected": is_two_edge_connected(G),
        "two_connected": is_two_connected(G),
        "cjv_condition": cjv_condition(G) if connected else None,
    }
    if G.n < 2:
        return report
    partition = classify_vertices(G)
    report["partition"] = {
        "threshold": partition.threshold,
        "small": sorted(partition.small),
        "large_count": len(partition.large),
    }
    report["small_vertices"] = [check.to_dict() for check in check_prop2(G, partition).checks()]
    density = G.m / (G.n * (G.n - 1) / 2)
    report["expansion"] = [check.to_dict() for check in check_prop1_sampled(G, density if p is None else p, trials, seed).checks()]
    H, _ = G.induced_subgraph(partition.large)
    if H.n:
        report["expander_large"] = check_expander_sampled(H, max(1, G.n // 150), 2.0, trials, seed).to_dict()
    return report


def _cmd_analyze(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    trials = args.trials if args.trials is not None else get_config().structure_sample_trials
    if trials < 1:
        raise InputError(f"--trials must be >= 1, got {trials}")
    if args.p is not None and not 0.0 <= args.p <= 1.0:
        raise InputError(f"--p must lie in [0, 1], got {args.p}")
    G = _load_graph(args.graph, stdin)
    stdout.write(dumps(_analysis(G, args.p, trials, args.seed)) + "\n")
    return EXIT_OK


def _cmd_ham(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    if args.restarts is not None and args.restarts < 0:
        raise InputError(f"--restarts must be >= 0, got {args.restarts}")
    G = _load_graph(args.graph, stdin)
    result = hamiltonian_cycle(G, restarts=args.restarts, seed=args.seed)
    if result.cycle is None:
        stdout.write(f"NOT FOUND ({result.method})\n")
        return EXIT_NEGATIVE
    stdout.write(" ".join(str(v) for v in result.cycle) + "\n")
    return EXIT_OK


def _cmd_color(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    G = _load_graph(args.graph, stdin)
    upper = cfc_upper(G, args.seed)
    if upper.coloring is None or upper.bound > 2:
        log_event("color.uncertified", level="error", method=upper.method, bound=upper.bound, stage=upper.stage_reached)
        return EXIT_BUDGET
    certificate = upper.certificate or is_conflict_free_connected(G, upper.coloring, seed=args.seed)
    if not certificate.certified:
        log_event("color.uncertified", level="error", method=upper.method, bound=upper.bound)
        return EXIT_BUDGET
    _emit(format_coloring(upper.coloring), args.out, stdout)
    payload = certificate_to_dict(certificate)
    payload["method"] = upper.method
    stdout.write(dumps(payload) + "\n")
    return EXIT_OK


def _cmd_check(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    G = _load_graph(args.graph, stdin)
    coloring: EdgeColoring = read_coloring(args.coloring, G)
    certificate = is_conflict_free_connected(G, coloring)
    stdout.write(dumps(certificate_to_dict(certificate)) + "\n")
    return EXIT_OK if certificate.certified else EXIT_NEGATIVE


def _cmd_cfc(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    if args.max_k is not None and args.max_k < 1:
        raise InputError(f"--max-k must be >= 1, got {args.max_k}")
    if args.budget is not None and args.budget < 0:
        raise InputError(f"--budget must be >= 0, got {args.budget}")
    G = _load_graph(args.graph, stdin)
    result = cfc_exact(G, max_k=args.max_k, edge_budget=args.budget)
    stdout.write(f"{result.value}\n")
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    if args.jobs is not None and args.jobs < 1:
        raise InputError(f"--jobs must be >= 1, got {args.jobs}")
    spec = ExperimentSpec(
        n=args.n,
        mode=args.mode,
        param=args.param,
        trials=args.trials,
        master_seed=args.seed,
        jobs=args.jobs,
    )
    result = run_experiment(spec)
    if args.out == "-":
        stdout.write(csv_text(result))
    else:
        write_csv(result, args.out)
        stdout.write(dumps(summary(result)) + "\n")
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "analyze": _cmd_analyze,
    "ham": _cmd_ham,
    "color": _cmd_color,
    "check": _cmd_check,
    "cfc": _cmd_cfc,
    "experiment": _cmd_experiment,
}


def dispatch(
    argv: Sequence[str],
    *,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Run one CLI command; returns 0 ok, 1 refuted/not found, 2 bad input, 3 budget exceeded."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        stderr.write(exc.usage)
        stderr.write(f"cfc: error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, stdin, stdout)
    except InputError as exc:
        stderr.write(f"cfc: error: {exc}\n")
        return EXIT_INPUT
    except (BudgetExceeded, GenerationFailure) as exc:
        stderr.write(f"cfc: budget exceeded: {exc}\n")
        return EXIT_BUDGET


def main(argv: List[str] | None = None) -> int:
    # Load local .env so LOG_LEVEL and CFC_* need not be exported
    load_dotenv()
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
