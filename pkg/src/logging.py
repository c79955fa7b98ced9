"""Structured JSONL run logging plus level-filtered stderr diagnostics."""
from __future__ import annotations

import atexit
import contextlib
import inspect
import json
import os
import queue
import sys
import threading
import time
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Any, Dict, List, Mapping, MutableMapping
from uuid import uuid4

import numpy as np
from dotenv import load_dotenv

from . import context_data

load_dotenv()

__all__ = [
    "log_event",
    "log_call",
    "log_level",
    "JsonlLogger",
    "flush_run_log",
    "reset_run_log",
]

_LEVELS = {"error": 40, "warning": 30, "info": 20, "debug": 10}
_RUN_LOG_MAX_BYTES = 20 * 1024 * 1024
_TRIM_RATIO = 0.25  # remove oldest 25% when limit is reached


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def _json_default(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    return repr(value)


def _truncate_string(text: str, limit: int = 512) -> str:
    if len(text) <= limit:
        return text
    return text[: limit - 3] + "..."


def _graph_summary(value: Any) -> Dict[str, Any] | None:
    # Graph-like objects are logged by size; edge lists can run to thousands of entries.
    n, m = getattr(value, "n", None), getattr(value, "m", None)
    if isinstance(n, int) and isinstance(m, int) and hasattr(value, "edges"):
        return {"graph": {"n": n, "m": m}}
    return None


def _json_safe(payload: Any, *, depth: int = 0) -> Any:
    if depth > 3:
        return "...(depth-limit)"
    if isinstance(payload, (str, int, float, bool)) or payload is None:
        return _truncate_string(payload) if isinstance(payload, str) else payload
    if isinstance(payload, np.generic):
        return payload.item()
    if isinstance(payload, np.ndarray):
        if payload.size <= 25:
            return payload.tolist()
        return {"ndarray": {"shape": list(payload.shape), "dtype": str(payload.dtype)}}
    summary = _graph_summary(payload)
    if summary is not None:
        return summary
    if isinstance(payload, Mapping):
        return {_truncate_string(str(k)): _json_safe(v, depth=depth + 1) for k, v in payload.items()}
    if isinstance(payload, (list, tuple, set, frozenset)):
        items = list(payload)
        rendered = [_json_safe(item, depth=depth + 1) for item in items[:25]]
        if len(items) > 25:
            rendered.append(f"...({len(items) - 25} more)")
        return rendered
    return _truncate_string(repr(payload))


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def log_level() -> int:
    """Threshold for stderr diagnostics, read from LOG_LEVEL on every call."""
    raw = (os.getenv("LOG_LEVEL") or "error").strip().lower()
    return _LEVELS.get(raw, _LEVELS["error"])


class _DisabledRunLog:
    def write(self, payload: Mapping[str, Any]) -> None:
        return

    def flush(self, timeout: float = 5.0) -> bool:
        return True

    def close(self) -> None:
        return


class JsonlLogger:
    """Append-only JSONL file fed by a daemon thread.

    Records are batched per drain. Once the file grows past `max_bytes` the
    oldest `trim_ratio` of it is dropped, cutting on a line boundary.
    """

    _BATCH = 64
    _SIZE_CHECK_EVERY = 256

    def __init__(self, path: Path, *, max_bytes: int, trim_ratio: float, queue_capacity: int = 5000) -> None:
        self.path = Path(path)
        self.max_bytes = max_bytes
        self.trim_ratio = min(0.5, max(0.05, trim_ratio))
        self._pending: "queue.Queue[str]" = queue.Queue(maxsize=queue_capacity)
        self._done = threading.Event()
        self._since_size_check = 0
        self._settled_cv = threading.Condition()
        self._queued = 0
        self._settled = 0
        self._thread = threading.Thread(target=self._drain_forever, name=f"cfc-runlog-{self.path.stem}", daemon=True)
        self._thread.start()
        atexit.register(self.close)

    def write(self, payload: Mapping[str, Any]) -> None:
        """Queue one record; under backpressure the oldest queued record is dropped."""
        line = self._encode(payload)
        with self._settled_cv:
            self._queued += 1
        while True:
            try:
                self._pending.put_nowait(line)
                return
            except queue.Full:
                with contextlib.suppress(queue.Empty):
                    self._pending.get_nowait()
                    self._settle(1)

    def flush(self, timeout: float = 5.0) -> bool:
        """Wait until every record queued so far is written (or dropped); False on timeout."""
        with self._settled_cv:
            target = self._queued
            return self._settled_cv.wait_for(lambda: self._settled >= target, timeout=timeout)

    def close(self) -> None:
        if self._done.is_set():
            return
        self._done.set()
        self._thread.join(timeout=1.0)

    @staticmethod
    def _encode(payload: Mapping[str, Any]) -> str:
        try:
            return json.dumps(payload, ensure_ascii=False, sort_keys=True, default=_json_default)
        except (TypeError, ValueError):
            return json.dumps({"event": "log.unserializable", "timestamp": _now_iso(), "repr": repr(payload)})

    def _take_batch(self, wait_s: float) -> List[str]:
        batch: List[str] = []
        try:
            batch.append(self._pending.get(timeout=wait_s))
        except queue.Empty:
            return batch
        while len(batch) < self._BATCH:
            try:
                batch.append(self._pending.get_nowait())
            except queue.Empty:
                break
        return batch

    def _drain_forever(self) -> None:
        while not (self._done.is_set() and self._pending.empty()):
            batch = self._take_batch(0.1 if self._done.is_set() else 0.5)
            if batch:
                try:
                    self._flush(batch)
                finally:
                    self._settle(len(batch))

    def _settle(self, count: int) -> None:
        with self._settled_cv:
            self._settled += count
            self._settled_cv.notify_all()

    def _flush(self, lines: List[str]) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.writelines(line + "\n" for line in lines)
        except OSError:
            return
        self._since_size_check += len(lines)
        if self._since_size_check >= self._SIZE_CHECK_EVERY:
            self._since_size_check = 0
            self._trim_oldest()

    def _trim_oldest(self) -> None:
        try:
            size = self.path.stat().st_size
        except OSError:
            return
        if size <= self.max_bytes:
            return
        drop = int(size * self.trim_ratio)
        scratch = self.path.with_name(self.path.name + ".trim")
        try:
            with self.path.open("rb") as fh:
                fh.seek(drop)
                fh.readline()  # skip the partial record at the cut
                tail = fh.read()
            scratch.write_bytes(tail)
            os.replace(scratch, self.path)
        except OSError:
            with contextlib.suppress(OSError):
                scratch.unlink()


_RUN_LOGGER: JsonlLogger | _DisabledRunLog | None = None
_RUN_LOGGER_LOCK = threading.Lock()


def _run_logger() -> JsonlLogger | _DisabledRunLog:
    global _RUN_LOGGER
    if _RUN_LOGGER is not None:
        return _RUN_LOGGER
    with _RUN_LOGGER_LOCK:
        if _RUN_LOGGER is None:
            from .config import get_config

            cfg = get_config()
            if not _env_flag("APP_ENABLE_JSONL_LOGS", cfg.jsonl_logs):
                _RUN_LOGGER = _DisabledRunLog()
            else:
                log_dir = Path(os.getenv("APP_LOG_DIR", cfg.log_dir))
                path = Path(os.getenv("CFC_RUN_LOG", log_dir / "cfc_runs.jsonl"))
                _RUN_LOGGER = JsonlLogger(path, max_bytes=_RUN_LOG_MAX_BYTES, trim_ratio=_TRIM_RATIO)
    return _RUN_LOGGER


def flush_run_log(timeout: float = 5.0) -> bool:
    """Block until the run log has written everything logged so far in this process."""
    current = _RUN_LOGGER
    return True if current is None else current.flush(timeout)


def reset_run_log() -> None:
    """Close the run log; the next event reopens it from the current environment."""
    global _RUN_LOGGER
    with _RUN_LOGGER_LOCK:
        current, _RUN_LOGGER = _RUN_LOGGER, None
    if current is not None:
        current.close()


def _forget_run_log_in_child() -> None:
    # the writer thread does not survive fork; the child opens its own on first use
    global _RUN_LOGGER, _RUN_LOGGER_LOCK
    _RUN_LOGGER = None
    _RUN_LOGGER_LOCK = threading.Lock()


if hasattr(os, "register_at_fork"):
    os.register_at_fork(after_in_child=_forget_run_log_in_child)


def log_event(event: str, *, level: str = "info", **fields: Any) -> None:
    """Record `event` to the JSONL sink and echo it to stderr when LOG_LEVEL lets it through."""
    severity = _LEVELS.get(level, _LEVELS["info"])
    entry: Dict[str, Any] = {"timestamp": _now_iso(), "event": event, "level": level}
    ctx = context_data.get_all()
    if ctx:
        entry["context"] = _json_safe(ctx)
    if fields:
        entry["fields"] = _json_safe(fields)
    _run_logger().write(entry)
    if severity >= log_level():
        detail = " ".join(f"{k}={_json_safe(v)}" for k, v in sorted(fields.items()))
        print(f"[{level}] {event} {detail}".rstrip(), file=sys.stderr)


def log_call(func):
    """Decorator recording start, success and exception of a heavyweight entry point."""

    if getattr(func, "__log_wrapped__", False):
        return func

    @wraps(func)
    def wrapper(*args, **kwargs):
        call_id = uuid4().hex[:12]
        start_ns = time.perf_counter_ns()
        name = f"{func.__module__}.{func.__qualname__}"
        log_event("call.start", level="debug", call_id=call_id, function=name, parameters=_bind_arguments(func, *args, **kwargs))
        try:
            result = func(*args, **kwargs)
        except Exception as exc:
            duration_ms = (time.perf_counter_ns() - start_ns) / 1_000_000
            log_event(
                "call.exception",
                level="debug",
                call_id=call_id,
                function=name,
                duration_ms=round(duration_ms, 3),
                exception={"type": type(exc).__name__, "message": _truncate_string(str(exc))},
            )
            raise
        duration_ms = (time.perf_counter_ns() - start_ns) / 1_000_000
        log_event("call.success", level="debug", call_id=call_id, function=name, duration_ms=round(duration_ms, 3))
        return result

    setattr(wrapper, "__log_wrapped__", True)
    return wrapper


def _bind_arguments(func, *args, **kwargs) -> MutableMapping[str, Any]:
    try:
        bound = inspect.signature(func).bind_partial(*args, **kwargs)
    except (TypeError, ValueError):
        return {}
    data: MutableMapping[str, Any] = {}
    for name, value in bound.arguments.items():
        if name in {"self", "cls"}:
            continue
        data[name] = _json_safe(value)
    return data
