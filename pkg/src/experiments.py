"""
Monte-Carlo experiments at desk scale.

Every trial draws its own seed from the master seed, so records do not depend
on how trials are scheduled. With jobs > 1 trials run in a process pool driven
from asyncio; gather() keeps results in trial order.
"""
from __future__ import annotations

import asyncio
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from . import context_data
from .coloring import cfc_upper
from .config import get_config
from .hamilton import hamiltonian_cycle
from .interfaces import ExperimentResult, ExperimentSpec, InputError, TrialRecord
from .logging import flush_run_log, log_call, log_event
from .random_graphs import gen_gnp, gen_random_regular, hamilton_threshold_p, threshold_p
from .report_format import render_csv
from .rng import substream_seed
from .structure import check_prop2, classify_vertices, is_connected, is_two_connected, is_two_edge_connected

CSV_HEADER = ("trial", "seed", "n", "p", "connected", "method", "bound", "certified")

_MODES = ("offset_a", "alpha", "hamilton_margin", "regular_r", "structure")


# ---- per-trial work (module level so worker processes can unpickle it) ----

def _connectivity_trial(trial: int, seed: int, n: int, p: float) -> TrialRecord:
    G = gen_gnp(n, p, seed)
    return TrialRecord(trial=trial, seed=seed, n=n, p=p, connected=is_connected(G), edges=G.m)


def _cfc_trial(trial: int, seed: int, n: int, p: float) -> TrialRecord:
    with context_data.scoped(trial=trial, seed=seed):
        G = gen_gnp(n, p, seed)
        record = TrialRecord(trial=trial, seed=seed, n=n, p=p, connected=is_connected(G), edges=G.m)
        if record.connected and n >= 2:
            upper = cfc_upper(G, seed, store_witnesses=False)
            record.method = upper.method
            record.bound = upper.bound
            record.certified = upper.certified
            record.stage = upper.stage_reached
        return record


def _regular_trial(trial: int, seed: int, n: int, r: int) -> TrialRecord:
    with context_data.scoped(trial=trial, seed=seed):
        G = gen_random_regular(n, r, seed)
        record = TrialRecord(trial=trial, seed=seed, n=n, p=None, connected=is_connected(G), edges=G.m)
        record.hamilton_found = hamiltonian_cycle(G, seed=seed).found
        if record.connected:
            upper = cfc_upper(G, seed, store_witnesses=False)
            record.method = upper.method
            record.bound = upper.bound
            record.certified = upper.certified
            record.stage = upper.stage_reached
        return record


def _structure_trial(trial: int, seed: int, n: int, p: float) -> TrialRecord:
    with context_data.scoped(trial=trial, seed=seed):
        G = gen_gnp(n, p, seed)
        record = TrialRecord(trial=trial, seed=seed, n=n, p=p, connected=is_connected(G), edges=G.m)
        record.two_edge_connected = is_two_edge_connected(G)
        record.two_connected = is_two_connected(G)
        partition = classify_vertices(G)
        record.small_count = len(partition.small)
        record.small_vertices_ok = check_prop2(G, partition).passed
        return record


def _call(fn: Callable[..., TrialRecord], args: Sequence[Any]) -> TrialRecord:
    return fn(*args)


def _call_pooled(fn: Callable[..., TrialRecord], args: Sequence[Any]) -> TrialRecord:
    # pool workers exit without running atexit hooks
    try:
        return fn(*args)
    finally:
        flush_run_log()


async def _gather_trials(fn: Callable[..., TrialRecord], work: List[Sequence[Any]], jobs: int) -> List[TrialRecord]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, _call_pooled, fn, args) for args in work]
        return list(await asyncio.gather(*futures))


def _run_trials(spec: ExperimentSpec, fn: Callable[..., TrialRecord], param: Any) -> List[TrialRecord]:
    jobs = spec.jobs if spec.jobs is not None else get_config().experiment_jobs
    jobs = max(1, min(int(jobs), spec.trials))
    work = [(t, substream_seed(spec.master_seed, t), spec.n, param) for t in range(spec.trials)]
    with context_data.scoped(experiment=spec.mode, n=spec.n, param=spec.param):
        if jobs == 1:
            records = [_call(fn, args) for args in work]
        else:
            records = asyncio.run(_gather_trials(fn, work, jobs))
    log_event("experiment.done", level="info", mode=spec.mode, n=spec.n, trials=spec.trials, jobs=jobs)
    return sorted(records, key=lambda r: r.trial)


# ---- aggregates ----

def _fraction(hits: int, total: int) -> float:
    return hits / total if total else 0.0


def _certified_le2(record: TrialRecord) -> bool:
    return bool(record.certified) and record.bound is not None and record.bound <= 2


def compute_aggregates(mode: str, records: Sequence[TrialRecord]) -> Dict[str, float]:
    """Aggregates as a pure function of the per-trial records."""
    total = len(records)
    connected = [r for r in records if r.connected]
    out: Dict[str, float] = {
        "trials": float(total),
        "fraction_connected": _fraction(len(connected), total),
        "mean_edges": sum(r.edges for r in records) / total if total else 0.0,
    }
    if mode in ("alpha", "hamilton_margin", "regular_r"):
        good = sum(1 for r in connected if _certified_le2(r))
        out["fraction_cfc_le2_among_connected"] = _fraction(good, len(connected))
        out["fraction_cfc_le2_unconditioned"] = _fraction(good, total)
        for method in ("complete", "constructive", "randomized", "exact", "trivial"):
            out[f"fraction_method_{method}"] = _fraction(sum(1 for r in connected if r.method == method), len(connected))
    if mode == "regular_r":
        found = [r for r in records if r.hamilton_found]
        out["fraction_hamilton_found"] = _fraction(len(found), total)
        out["fraction_cfc_le2_among_hamilton"] = _fraction(sum(1 for r in found if _certified_le2(r)), len(found))
    if mode == "structure":
        out["fraction_two_edge_connected"] = _fraction(sum(1 for r in records if r.two_edge_connected), total)
        out["fraction_two_connected"] = _fraction(sum(1 for r in records if r.two_connected), total)
        out["fraction_small_vertices_ok"] = _fraction(sum(1 for r in records if r.small_vertices_ok), total)
        out["mean_small_count"] = sum(r.small_count or 0 for r in records) / total if total else 0.0
    return out


def theory_values(spec: ExperimentSpec) -> Dict[str, float]:
    if spec.mode in ("offset_a", "alpha", "structure"):
        return {"connected_limit": math.exp(-math.exp(-spec.param))}
    if spec.mode == "hamilton_margin":
        return {"hamilton_limit": math.exp(-math.exp(-spec.param))}
    return {}


def _result(spec: ExperimentSpec, records: List[TrialRecord]) -> ExperimentResult:
    return ExperimentResult(spec=spec, records=records, aggregates=compute_aggregates(spec.mode, records), theory=theory_values(spec))


# ---- runners ----

def _validate(spec: ExperimentSpec, modes: Sequence[str]) -> None:
    if spec.mode not in modes:
        raise InputError(f"mode {spec.mode!r} not handled here (expected one of {', '.join(modes)})")
    if spec.trials < 1:
        raise InputError(f"trials must be >= 1, got {spec.trials}")
    if spec.n < 2:
        raise InputError(f"n must be >= 2, got {spec.n}")


@log_call
def run_connectivity_experiment(spec: ExperimentSpec) -> ExperimentResult:
    _validate(spec, ("offset_a",))
    p = threshold_p(spec.n, spec.param)
    return _result(spec, _run_trials(spec, _connectivity_trial, p))


@log_call
def run_cfc_experiment(spec: ExperimentSpec) -> ExperimentResult:
    _validate(spec, ("alpha", "hamilton_margin"))
    if spec.mode == "alpha":
        p = threshold_p(spec.n, spec.param)
    else:
        p = hamilton_threshold_p(spec.n, spec.param)
    return _result(spec, _run_trials(spec, _cfc_trial, p))


@log_call
def run_regular_experiment(spec: ExperimentSpec) -> ExperimentResult:
    _validate(spec, ("regular_r",))
    r = int(spec.param)
    if r != spec.param or r < 3:
        raise InputError(f"regular_r needs an integer r >= 3, got {spec.param}")
    if (spec.n * r) % 2:
        raise InputError(f"n*r must be even, got n={spec.n}, r={r}")
    if r >= spec.n:
        raise InputError(f"degree r={r} must be below n={spec.n}")
    return _result(spec, _run_trials(spec, _regular_trial, r))


@log_call
def run_structure_experiment(spec: ExperimentSpec) -> ExperimentResult:
    _validate(spec, ("structure",))
    p = threshold_p(spec.n, spec.param)
    return _result(spec, _run_trials(spec, _structure_trial, p))


_RUNNERS: Dict[str, Callable[[ExperimentSpec], ExperimentResult]] = {
    "offset_a": run_connectivity_experiment,
    "alpha": run_cfc_experiment,
    "hamilton_margin": run_cfc_experiment,
    "regular_r": run_regular_experiment,
    "structure": run_structure_experiment,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    try:
        runner = _RUNNERS[spec.mode]
    except KeyError:
        raise InputError(f"unknown experiment mode {spec.mode!r}; choose from {', '.join(_MODES)}") from None
    return runner(spec)


# ---- output ----

def csv_text(result: ExperimentResult) -> str:
    rows = [(r.trial, r.seed, r.n, r.p, r.connected, r.method, r.bound, r.certified) for r in result.records]
    return render_csv(CSV_HEADER, rows)


def write_csv(result: ExperimentResult, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(csv_text(result), encoding="utf-8")


def summary(result: ExperimentResult) -> Dict[str, Any]:
    spec = asdict(result.spec)
    spec.pop("jobs", None)
    return {"spec": spec, "aggregates": dict(result.aggregates), "theory": dict(result.theory)}
