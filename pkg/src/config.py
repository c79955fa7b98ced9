from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
import os

import yaml

"""
Run configuration loaded from YAML (single source of truth).
Location: project_root/config.yaml, or the file named by CFC_CONFIG_PATH.
Every key is optional; missing or malformed values fall back to the defaults below.
"""


@dataclass(frozen=True)
class AppConfig:
    ham_restarts: int = 50
    ham_rotations_per_vertex: int = 20
    ham_exact_cutoff: int = 18
    cfc_edge_budget: int = 14
    cfc_max_k: int = 6
    cfc_random_colorings: int = 50
    cfc_witness_store_limit: int = 100
    cfc_sampled_witnesses: int = 20
    structure_sample_trials: int = 200
    regular_max_resamples: int = 1000
    experiment_jobs: int = 1
    jsonl_logs: bool = True
    log_dir: str = "logs"


def _project_root() -> Path:
    return Path(__file__).resolve().parents[1]


def _find_config_file() -> Path | None:
    override = (os.getenv("CFC_CONFIG_PATH") or "").strip()
    if override:
        path = Path(override).expanduser()
        return path if path.exists() else None
    p = _project_root() / "config.yaml"
    return p if p.exists() else None


def _section(data: dict, name: str) -> dict:
    value = data.get(name, {})
    return value if isinstance(value, dict) else {}


def _positive_int(section: dict, key: str, default: int, *, minimum: int = 1) -> int:
    try:
        value = int(section.get(key, default))
    except Exception:
        return default
    return value if value >= minimum else minimum


def _flag(section: dict, key: str, default: bool) -> bool:
    raw = section.get(key, default)
    if isinstance(raw, bool):
        return raw
    return str(raw).strip().lower() in {"1", "true", "yes", "on"}


@lru_cache
def get_config() -> AppConfig:
    cfg_path = _find_config_file()
    if cfg_path is None:
        return AppConfig()
    try:
        loaded = yaml.safe_load(cfg_path.read_text(encoding="utf-8"))
    except Exception as exc:
        raise RuntimeError(f"Failed to read YAML config {cfg_path}: {exc}")
    if loaded is None:
        return AppConfig()
    if not isinstance(loaded, dict):
        raise RuntimeError(f"{cfg_path.name} must contain a YAML mapping (dict)")

    ham = _section(loaded, "hamilton")
    cfc = _section(loaded, "cfc")
    structure = _section(loaded, "structure")
    regular = _section(loaded, "regular")
    experiments = _section(loaded, "experiments")
    logging_cfg = _section(loaded, "logging")
    defaults = AppConfig()

    return AppConfig(
        ham_restarts=_positive_int(ham, "restarts", defaults.ham_restarts),
        ham_rotations_per_vertex=_positive_int(ham, "rotations_per_vertex", defaults.ham_rotations_per_vertex),
        ham_exact_cutoff=_positive_int(ham, "exact_cutoff", defaults.ham_exact_cutoff, minimum=0),
        cfc_edge_budget=_positive_int(cfc, "edge_budget", defaults.cfc_edge_budget),
        cfc_max_k=_positive_int(cfc, "max_k", defaults.cfc_max_k),
        cfc_random_colorings=_positive_int(cfc, "random_colorings", defaults.cfc_random_colorings, minimum=0),
        cfc_witness_store_limit=_positive_int(cfc, "witness_store_limit", defaults.cfc_witness_store_limit, minimum=0),
        cfc_sampled_witnesses=_positive_int(cfc, "sampled_witnesses", defaults.cfc_sampled_witnesses, minimum=0),
        structure_sample_trials=_positive_int(structure, "sample_trials", defaults.structure_sample_trials),
        regular_max_resamples=_positive_int(regular, "max_resamples", defaults.regular_max_resamples),
        experiment_jobs=_positive_int(experiments, "jobs", defaults.experiment_jobs),
        jsonl_logs=_flag(logging_cfg, "jsonl", defaults.jsonl_logs),
        log_dir=str(logging_cfg.get("dir") or defaults.log_dir),
    )


def reset_config_cache() -> None:
    """Forget the cached config (tests swap CFC_CONFIG_PATH between runs)."""
    get_config.cache_clear()
