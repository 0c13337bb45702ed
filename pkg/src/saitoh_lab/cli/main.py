"""``saitoh-lab`` command line: run, sweep and report."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, load_config
from .report import from_json, rows, sweep_csv, to_csv, to_json, write_reports
from .scenarios import VIOLATION, run_scenario, with_N, evaluate_sides, check_hypotheses, HypothesisViolation

log = logging.getLogger("saitoh_lab")

MONOTONE_SLACK = 1e-10


def _jobs(arg: int | None) -> int:
    env = os.environ.get("SAITOH_LAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(f"SAITOH_LAB_JOBS must be an integer, got {env!r}")
    return max(1, arg or 1)


def _timed(s):
    t0 = time.perf_counter()
    o = run_scenario(s)
    return o, time.perf_counter() - t0


def cmd_run(args) -> int:
    try:
        scenarios = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    jobs = _jobs(args.jobs)
    if jobs > 1 and len(scenarios) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_timed, scenarios))
    else:
        results = [_timed(s) for s in scenarios]
    outcomes = [o for o, _ in results]
    out = Path(args.out)
    rs = rows(outcomes)
    try:
        write_reports(rs, out)
        details = {o.id: {"theorem": o.theorem, **_jsonable(o.detail), "kernels": _jsonable(o.kernels)} for o in outcomes}
        (out / "details.json").write_text(json.dumps(dict(sorted(details.items())), indent=2, sort_keys=True) + "\n")
        (out / "timings.json").write_text(
            json.dumps({o.id: round(t, 3) for o, t in results}, indent=2, sort_keys=True) + "\n"
        )
    except OSError as exc:
        print(f"cannot write reports to {out}: {exc.strerror}", file=sys.stderr)
        return 2
    for o in sorted(outcomes, key=lambda o: o.id):
        status = o.passed if isinstance(o.passed, str) else ("pass" if o.passed else "FAIL")
        why = f"  ({o.detail['reason']})" if o.passed == VIOLATION else ""
        ratio = "" if o.ratio is None else f"  ratio={o.ratio:.10g}"
        print(f"{o.id:32s} {o.theorem:14s} {status}{ratio}{why}")
    return 0 if all(o.passed is True for o in outcomes) else 1


def _jsonable(d):
    if isinstance(d, dict):
        return {str(k): _jsonable(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_jsonable(v) for v in d]
    if hasattr(d, "item"):
        return d.item()
    return d


def cmd_sweep(args) -> int:
    try:
        scenarios = {s.id: s for s in load_config(args.config)}
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.scenario not in scenarios:
        print(f"unknown scenario id {args.scenario!r}; known: {sorted(scenarios)}", file=sys.stderr)
        return 2
    s = scenarios[args.scenario]
    try:
        check_hypotheses(s)
    except HypothesisViolation as exc:
        print(f"{s.id}: {VIOLATION} ({exc})", file=sys.stderr)
        return 1
    degrees = [int(x) for x in args.degrees.split(",") if x.strip()]
    table = []
    for N in degrees:
        lhs, rhs, kern = evaluate_sides(with_N(s, N), N)
        table.append({"N": N, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs if rhs else None, **kern})
    monotone = True
    keys = sorted(k for k, v in table[0].items() if k not in ("N", "lhs", "rhs", "ratio") and not isinstance(v, bool))
    for prev, cur in zip(table[:-1], table[1:]):
        for k in keys:
            if cur[k] < prev[k] * (1 - MONOTONE_SLACK):
                monotone = False
                print(f"non-monotone {k}: N={prev['N']} -> {cur['N']}: {prev[k]!r} -> {cur[k]!r}", file=sys.stderr)
    text = sweep_csv(s.id, table)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"sweep_{s.id}.csv").write_text(text)
    except OSError as exc:
        print(f"cannot write sweep to {out}: {exc.strerror}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0 if monotone else 1


def cmd_report(args) -> int:
    src = Path(args.out) / "report.json"
    try:
        rs = from_json(src.read_text())
    except OSError as exc:
        print(f"cannot read {src}: {exc.strerror}", file=sys.stderr)
        return 2
    sys.stdout.write(to_json(rs) if args.format == "json" else to_csv(rs))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="saitoh-lab", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run every scenario of a config file")
    r.add_argument("config")
    r.add_argument("--out", default="results")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_run)
    s = sub.add_parser("sweep", help="rerun one scenario across truncation degrees")
    s.add_argument("config")
    s.add_argument("--scenario", required=True)
    s.add_argument("--degrees", default="4,8,16")
    s.add_argument("--out", default="results")
    s.set_defaults(func=cmd_sweep)
    p = sub.add_parser("report", help="print the last run report")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="results")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
