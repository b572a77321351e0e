"""Report serialization and independent re-verification."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .graph import OrientedGraph


@lru_cache(maxsize=1)
def report_schema() -> dict:
    return json.loads(resources.files("cyclepack").joinpath("report_schema.json").read_text())


def validate_schema(data: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``data`` is not a report."""
    jsonschema.validate(data, report_schema())


def write_report(report, path) -> None:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    validate_schema(data)
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())


def verify_report(data: dict, g: OrientedGraph) -> list[str]:
    """Re-check a report against its instance; returns the list of problems
    (empty when consistent).  Every cycle problem names the cycle index."""
    problems = []
    try:
        validate_schema(data)
    except jsonschema.ValidationError as err:
        return [f"report does not match the schema: {err.message}"]
    if data["instance_sha256"] != g.sha256:
        problems.append("instance_sha256 does not match the graph")
    if data["n"] != g.n:
        problems.append(f"report is for n={data['n']}, graph has n={g.n}")
    seen: dict[int, int] = {}
    for i, cyc in enumerate(data["cycles"]):
        if len(cyc) < 3:
            problems.append(f"cycle {i}: length {len(cyc)} < 3")
            continue
        bad = [v for v in cyc if not (0 <= v < g.n)]
        if bad:
            problems.append(f"cycle {i}: vertex {bad[0]} outside 0..{g.n - 1}")
            continue
        if len(set(cyc)) != len(cyc):
            problems.append(f"cycle {i}: repeats a vertex")
            continue
        for j, u in enumerate(cyc):
            w = cyc[(j + 1) % len(cyc)]
            if not g.has_edge(u, w):
                problems.append(f"cycle {i}: edge {u}->{w} is not in the graph")
                break
        for v in cyc:
            if v in seen:
                problems.append(f"cycle {i}: vertex {v} already used by cycle {seen[v]}")
                break
        for v in cyc:
            seen.setdefault(v, i)
    expected = sorted(v for v in range(g.n) if v not in seen)
    if sorted(data["uncovered"]) != expected:
        problems.append(f"uncovered list disagrees with the cycles ({len(data['uncovered'])} listed, "
                        f"{len(expected)} actual)")
    return problems
