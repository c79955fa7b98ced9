# integration-tests/run_all.py
from __future__ import annotations

import argparse
import asyncio
import contextlib
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from time import monotonic
from typing import List, Tuple


PROJECT_ROOT = Path(__file__).resolve().parents[1]
TEST_DIR = PROJECT_ROOT / "integration-tests"
MONTECARLO_SUFFIX = "_montecarlo"

_CHECK_LINE = re.compile(r"^\[ (OK|FAIL) \] (.*)$")

RESET = "\x1b[0m"
GREY = "\x1b[90m"
GREEN = "\x1b[32m"
RED = "\x1b[31m"
YELLOW = "\x1b[33m"


@dataclass
class ScriptResult:
    path: Path
    returncode: int
    duration_s: float
    stdout: str
    stderr: str
    passed_checks: List[str] = field(default_factory=list)
    failed_checks: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.returncode == 0


def is_montecarlo(path: Path) -> bool:
    return path.stem.endswith(MONTECARLO_SUFFIX)


def discover_tests(pattern: str | None = None, *, tier: str = "all") -> List[Path]:
    """test_*.py in this directory; tier is 'all', 'fast' or 'montecarlo'."""
    found = []
    for p in sorted(TEST_DIR.glob("test_*.py")):
        if tier == "fast" and is_montecarlo(p):
            continue
        if tier == "montecarlo" and not is_montecarlo(p):
            continue
        if pattern and pattern not in p.name:
            continue
        found.append(p)
    return found


def _split_checks(stdout: str) -> Tuple[List[str], List[str]]:
    passed, failed = [], []
    for line in stdout.splitlines():
        match = _CHECK_LINE.match(line.strip())
        if match is None:
            continue
        (passed if match.group(1) == "OK" else failed).append(match.group(2))
    return passed, failed


async def run_script(path: Path, timeout_s: float | None) -> ScriptResult:
    start = monotonic()
    env = os.environ.copy()
    env.setdefault("APP_ENABLE_JSONL_LOGS", "0")
    env.setdefault("LOG_LEVEL", "error")
    proc = await asyncio.create_subprocess_exec(
        sys.executable,
        str(path),
        cwd=str(PROJECT_ROOT),
        stdout=asyncio.subprocess.PIPE,
        stderr=asyncio.subprocess.PIPE,
        env=env,
    )
    try:
        stdout_b, stderr_b = await asyncio.wait_for(proc.communicate(), timeout=timeout_s or None)
        rc = proc.returncode or 0
    except asyncio.TimeoutError:
        with contextlib.suppress(ProcessLookupError):
            proc.kill()
        await proc.wait()
        stdout_b, stderr_b = b"", f"[TIMEOUT] exceeded {timeout_s:.0f}s".encode("utf-8")
        rc = 124
    stdout = stdout_b.decode("utf-8", errors="replace")
    passed, failed = _split_checks(stdout)
    return ScriptResult(
        path=path,
        returncode=rc,
        duration_s=monotonic() - start,
        stdout=stdout,
        stderr=stderr_b.decode("utf-8", errors="replace"),
        passed_checks=passed,
        failed_checks=failed,
    )


async def run_scripts(tests: List[Path], jobs: int, fast_timeout: float, montecarlo_timeout: float, verbose: bool) -> List[ScriptResult]:
    sem = asyncio.Semaphore(max(1, jobs))
    results: List[ScriptResult] = []

    async def guarded(p: Path) -> None:
        async with sem:
            print(f"{YELLOW}[ RUN ]{RESET} {p.name}")
            res = await run_script(p, montecarlo_timeout if is_montecarlo(p) else fast_timeout)
            color = GREEN if res.ok else RED
            status = "OK" if res.ok else "FAIL"
            counts = f"{len(res.passed_checks)}/{len(res.passed_checks) + len(res.failed_checks)} checks"
            print(f"{color}[ {status} ]{RESET} {p.name} ({counts}) in {res.duration_s:.1f}s")
            shown = res.stdout.strip() if (verbose or not res.ok) else ""
            if shown:
                print(f"{GREY}{shown}{RESET}")
            if res.stderr.strip() and (verbose or not res.ok):
                print(f"{GREY}{res.stderr.strip()}{RESET}")
            results.append(res)

    # longest scripts first so the pool drains evenly
    ordered = sorted(tests, key=lambda p: (not is_montecarlo(p), p.name))
    await asyncio.gather(*(guarded(p) for p in ordered))
    return sorted(results, key=lambda r: r.path.name)


def parse_args(argv: List[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Run the integration-test scripts in parallel.")
    parser.add_argument("-k", metavar="SUBSTR", default=None, help="only scripts whose name contains SUBSTR")
    parser.add_argument("-j", "--jobs", type=int, default=4, help="parallel scripts (default: 4)")
    tier = parser.add_mutually_exclusive_group()
    tier.add_argument("--fast", action="store_true", help="skip the *_montecarlo scripts")
    tier.add_argument("--montecarlo", action="store_true", help="run only the *_montecarlo scripts")
    parser.add_argument("--timeout", type=float, default=300.0, help="per-script timeout in seconds (0 disables)")
    parser.add_argument("--montecarlo-timeout", type=float, default=1800.0, help="timeout for *_montecarlo scripts")
    parser.add_argument("-v", "--verbose", action="store_true", help="print script output even on success")
    return parser.parse_args(argv)


async def main_async(argv: List[str]) -> int:
    args = parse_args(argv)
    tier = "fast" if args.fast else "montecarlo" if args.montecarlo else "all"
    tests = discover_tests(args.k, tier=tier)
    if not tests:
        print("No tests found.")
        return 0

    print(f"Discovered {len(tests)} script(s) in {TEST_DIR.relative_to(PROJECT_ROOT)} ({tier})")
    start = monotonic()
    results = await run_scripts(tests, args.jobs, args.timeout, args.montecarlo_timeout, args.verbose)
    failed = [r for r in results if not r.ok]
    checks = sum(len(r.passed_checks) + len(r.failed_checks) for r in results)
    print("")
    print(f"Summary: {len(results) - len(failed)}/{len(results)} scripts passed, {checks} checks, {monotonic() - start:.1f}s")
    for r in failed:
        print(f"- {r.path.name} (rc={r.returncode})")
        for name in r.failed_checks:
            print(f"    {name}")
    return 1 if failed else 0


def main() -> int:
    try:
        return asyncio.run(main_async(sys.argv[1:]))
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    raise SystemExit(main())
