"""Deterministic JSON/CSV reports: fixed key order, 17 significant digits."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

FIELDS = ("id", "lhs", "rhs", "ratio", "pass")


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return f"{float(x):.17g}"


def _json_value(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, float)):
        return fmt(x) if math.isfinite(x) else "null"
    return json.dumps(x)


def rows(outcomes: Iterable) -> list[dict]:
    out = [
        {"id": o.id, "lhs": o.lhs, "rhs": o.rhs, "ratio": o.ratio, "pass": o.passed}
        for o in outcomes
    ]
    return sorted(out, key=lambda r: r["id"])


def to_json(rs: list[dict]) -> str:
    if not rs:
        return "[]\n"
    lines = []
    for r in rs:
        body = ", ".join(f'"{k}": {_json_value(r[k])}' for k in FIELDS)
        lines.append("  {" + body + "}")
    return "[\n" + ",\n".join(lines) + "\n]\n"


def _csv_pass(v) -> str:
    return ("true" if v else "false") if isinstance(v, bool) else str(v)


def to_csv(rs: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in rs:
        w.writerow([r["id"], fmt(r["lhs"]), fmt(r["rhs"]), fmt(r["ratio"]), _csv_pass(r["pass"])])
    return buf.getvalue()


def from_json(text: str) -> list[dict]:
    return json.loads(text)


def write_reports(rs: list[dict], out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(to_json(rs))
    (out / "report.csv").write_text(to_csv(rs))


def sweep_csv(scenario_id: str, table: list[dict]) -> str:
    keys = ["N", "lhs", "rhs", "ratio"]
    extra = sorted({k for r in table for k in r} - set(keys))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys + extra)
    for r in table:
        w.writerow([r["N"]] + [fmt(r.get(k)) if not isinstance(r.get(k), bool) else r[k] for k in keys[1:] + extra])
    return buf.getvalue()
