"""Deterministic JSON and CSV rendering: sorted keys, floats at 6 significant digits."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping, Sequence


def round_float(value: float) -> float | None:
    if math.isnan(value) or math.isinf(value):
        return None
    return float(f"{value:.6g}")


def normalize(payload: Any) -> Any:
    """Recursively round floats and turn tuples/sets into lists so dumps() is stable."""
    if isinstance(payload, bool) or payload is None or isinstance(payload, (int, str)):
        return payload
    if isinstance(payload, float):
        return round_float(payload)
    if isinstance(payload, Mapping):
        return {str(k): normalize(v) for k, v in payload.items()}
    if isinstance(payload, (set, frozenset)):
        return [normalize(v) for v in sorted(payload)]
    if isinstance(payload, (list, tuple)):
        return [normalize(v) for v in payload]
    if hasattr(payload, "item"):
        # numpy scalars
        return normalize(payload.item())
    return str(payload)


def dumps(payload: Any, *, indent: int | None = 2) -> str:
    return json.dumps(normalize(payload), sort_keys=True, indent=indent, ensure_ascii=False)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        rounded = round_float(value)
        return "" if rounded is None else f"{value:.6g}"
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()
