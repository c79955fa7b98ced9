from __future__ import annotations

"""Per-task context (experiment, trial, seed) attached to every log record."""

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Iterator, Optional

_CTX: ContextVar[Optional[Dict[str, Any]]] = ContextVar("cfc_run_context", default=None)


@contextmanager
def scoped(**values: Any) -> Iterator[Dict[str, Any]]:
    """Layer `values` over the current context for the duration of the block."""
    merged = dict(_CTX.get() or {})
    merged.update(values)
    token = _CTX.set(merged)
    try:
        yield merged
    finally:
        _CTX.reset(token)


def get(key: str, default: Any = None) -> Any:
    data = _CTX.get()
    if data is None:
        return default
    return data.get(key, default)


def get_all() -> Dict[str, Any]:
    data = _CTX.get()
    return dict(data) if data is not None else {}
