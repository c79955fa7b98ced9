# Pytest wiring for the standalone check scripts in this directory.
# Each test_* function returns (ok, message) for support.run_checks; under
# pytest a returned (False, message) must count as a failure, not a warning.
from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def tmp(tmp_path: Path) -> Path:
    """Scratch directory, as the scripts' main() passes to test_edge_list_format."""
    return tmp_path


@pytest.hookimpl(tryfirst=True)
def pytest_pyfunc_call(pyfuncitem):
    funcargs = pyfuncitem.funcargs
    kwargs = {name: funcargs[name] for name in pyfuncitem._fixtureinfo.argnames}
    result = pyfuncitem.obj(**kwargs)
    if isinstance(result, tuple) and len(result) == 2 and isinstance(result[0], bool):
        ok, msg = result
        if not ok:
            pytest.fail(f"check failed: {msg}", pytrace=False)
    return True
