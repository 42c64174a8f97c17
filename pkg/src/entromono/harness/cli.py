"""``entromono <command> --scenario <path> [--horizon N] [--report <path>] [--cache-dir <path>] [--jobs N]``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from ..errors import EntromonoError, ScenarioError
from .cache import LevelCache, default_cache_dir
from .commands import COMMANDS, Context
from .report import build_report, dumps, render, validate_report
from .scenario import Scenario


def run(command: str, scenario_path: str | Path, horizon: int | None = None, cache_dir: str | Path | None = None, jobs: int = 1) -> dict:
    """Run one command and return the report dictionary."""
    if command not in COMMANDS:
        raise ScenarioError(f"unknown command {command!r}")
    t0 = time.perf_counter()
    cache = LevelCache(cache_dir if cache_dir is not None else default_cache_dir())
    sc = None
    result = None
    error = None
    try:
        sc = Scenario.load(scenario_path, horizon)
        result = COMMANDS[command](Context(sc, cache, max(1, jobs)))
    except ScenarioError:
        raise
    except EntromonoError as e:
        error = f"{type(e).__name__}: {e}"
    rep = build_report(command, sc, result, cache.stats(), time.perf_counter() - t0, error)
    validate_report(rep)
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entromono", description="Entropy of amenable-monoid actions on abelian groups.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--horizon", type=int, default=None, help="override the scenario horizon")
    p.add_argument("--report", default=None, help="write the machine-readable report here")
    p.add_argument("--cache-dir", default=None, help="trajectory cache directory (default: $ENTROMONO_CACHE_DIR)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent family members")
    p.add_argument("-q", "--quiet", action="store_true", help="print only the pass/fail lines")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    if args.horizon is not None and args.horizon < 2:
        print("error: --horizon must be at least 2", file=sys.stderr)
        return 2
    try:
        rep = run(args.command, args.scenario, args.horizon, args.cache_dir, args.jobs)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.report:
        Path(args.report).write_text(dumps(rep))
    text = render(rep)
    if args.quiet:
        text = "\n".join(l for l in text.splitlines() if l.startswith(("PASS", "FAIL", "ERROR", "overall")))
    print(text)
    return 0 if rep["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
