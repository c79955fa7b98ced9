from __future__ import annotations

# Importing src.logging loads .env once per process, before any config is read.
from . import logging as _app_logging  # noqa: F401

__all__: list[str] = []
