"""Run reports: deterministic JSON plus a plain-text table."""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from .commands import CommandResult
from .scenario import load_schema

REPORT_SCHEMA_VERSION = "1"


def build_report(command: str, scenario, result: CommandResult | None, cache_stats: dict, wall: float, error: str | None = None) -> dict:
    checks = [c.as_dict() for c in result.checks] if result else []
    passed = error is None and bool(checks) and all(c["passed"] for c in checks)
    rep = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": command,
        "scenario": {
            "name": scenario.name if scenario else None,
            "digest": scenario.digest if scenario else "",
            "horizon": scenario.horizon if scenario else None,
        },
        "passed": passed,
        "error": error,
        "checks": checks,
        "tables": result.tables if result else {},
        "cache": cache_stats,
        "timing": {"wall_seconds": round(wall, 6)},
    }
    return json.loads(json.dumps(rep, default=str))


def validate_report(rep: dict) -> None:
    jsonschema.validate(rep, load_schema("report"))


def dumps(rep: dict) -> str:
    return json.dumps(rep, sort_keys=True, indent=2) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render_table(rows: list[dict], limit: int = 60) -> str:
    if not rows:
        return "  (empty)"
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    shown = rows[:limit]
    widths = {c: max(len(c), *(len(_cell(r.get(c, ""))) for r in shown)) for c in cols}
    lines = ["  " + "  ".join(c.ljust(widths[c]) for c in cols)]
    lines.append("  " + "  ".join("-" * widths[c] for c in cols))
    for r in shown:
        lines.append("  " + "  ".join(_cell(r.get(c, "")).ljust(widths[c]) for c in cols))
    if len(rows) > limit:
        lines.append(f"  ... {len(rows) - limit} more rows")
    return "\n".join(lines)


def render(rep: dict) -> str:
    out = [f"{rep['command']} on {rep['scenario']['name']} (horizon {rep['scenario']['horizon']})"]
    for name, rows in rep["tables"].items():
        out.append(f"\n[{name}]")
        out.append(render_table(rows))
    out.append("")
    for c in rep["checks"]:
        out.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  (tolerance: {c['tolerance']})")
    if rep.get("error"):
        out.append(f"ERROR  {rep['error']}")
    cache = rep["cache"]
    out.append(f"cache: {cache['hits']} hits, {cache['misses']} misses")
    out.append(f"overall: {'PASS' if rep['passed'] else 'FAIL'}")
    return "\n".join(out)
