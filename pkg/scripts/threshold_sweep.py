from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


def sweep(n: int, mode: str, values: list[float], trials: int, seed: int, jobs: int | None) -> list[dict]:
    from src.experiments import run_experiment  # type: ignore
    from src.interfaces import ExperimentSpec  # type: ignore

    rows = []
    for value in values:
        result = run_experiment(
            ExperimentSpec(n=n, mode=mode, param=value, trials=trials, master_seed=seed, jobs=jobs)  # type: ignore[arg-type]
        )
        row = {"param": value, **result.theory}
        for key in ("fraction_connected", "fraction_cfc_le2_among_connected", "fraction_hamilton_found"):
            if key in result.aggregates:
                row[key] = result.aggregates[key]
        rows.append(row)
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description="Sweep an experiment parameter and print empirical vs limiting values.")
    ap.add_argument("--mode", default="offset_a", choices=("offset_a", "alpha", "hamilton_margin", "structure"))
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--values", default="-2,-1,0,1,2", help="comma-separated parameter values")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()

    values = [float(v) for v in args.values.split(",") if v.strip()]
    rows = sweep(args.n, args.mode, values, args.trials, args.seed, args.jobs)
    for row in rows:
        print(json.dumps(row, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
