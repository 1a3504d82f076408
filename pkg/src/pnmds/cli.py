"""Command line: ``pnmds gen|run|exact|bench|verify``.

Structured results go to stdout as JSON lines or CSV; diagnostics go to stderr.
Exit status is the gate: 0 only when every check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import RATIO_GATE, BenchFailure, bench_specs, max_ratio, records_to_csv, run_bench
from .exact_oracle import DEFAULT_BUDGET, exact_mds, is_dominating
from .generators import FAMILIES, FamilySpec, generate
from .mds_protocol import run_distributed
from .port_graph import GraphError, PortGraph, format_graph, graph_to_obj, planarity_bound_check, read_graph

FAMILY_PARAMS = {
    "grid": ("rows", "cols"),
    "cycle": ("n",),
    "star": ("k",),
    "caterpillar": ("spine", "leaves"),
    "shared_hub": ("k",),
    "triangulation": ("n",),
}


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj) -> None:
    print(json.dumps(obj))


def parse_int_list(text: str) -> list[int]:
    """``"3..12"`` (inclusive), ``"1,4,9"`` or a mix like ``"1,5..7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _load(path: str) -> PortGraph:
    g = read_graph(path)
    verdict = planarity_bound_check(g)
    if not verdict:
        _diag(f"warning: {path} exceeds the planar edge bound by {verdict.excess}; graph is not planar")
    return g


def cmd_gen(args) -> int:
    names = FAMILY_PARAMS[args.family]
    params = {}
    for name in names:
        val = getattr(args, name)
        if val is None:
            _diag(f"error: family {args.family} needs --{name}")
            return 2
        params[name] = val
    try:
        g = generate(FamilySpec(args.family, params, args.seed, args.keep_prob))
    except ValueError as exc:
        _diag(f"error: {exc}")
        return 2
    payload = json.dumps(graph_to_obj(g)) + "\n" if args.format == "json" else format_graph(g)
    if args.output in (None, "-"):
        sys.stdout.write(payload)
    else:
        try:
            Path(args.output).write_text(payload, encoding="utf-8")
        except OSError as exc:
            _diag(f"error: cannot write {args.output}: {exc}")
            return 2
    return 0


def cmd_run(args) -> int:
    g = _load(args.graph)
    res = run_distributed(g, trace=sys.stdout if args.trace else None)
    _emit(res.to_obj())
    verdict = is_dominating(g, res.D)
    if not verdict:
        _diag(f"error: output does not dominate vertex {verdict.witness}")
        return 1
    return 0


def cmd_exact(args) -> int:
    g = _load(args.graph)
    res = exact_mds(g, args.budget)
    _emit(res.to_obj())
    if not res.optimal:
        _diag(f"error: budget of {args.budget} branch nodes exhausted; size {res.size} is an upper bound")
        return 1
    return 0


def cmd_bench(args) -> int:
    families = [f for fam in args.family for f in fam.split(",")]
    for f in families:
        if f not in FAMILIES:
            _diag(f"error: unknown family {f!r}")
            return 2
    keeps = [float(k) for k in args.keep_prob.split(",")]
    specs = bench_specs(families, parse_int_list(args.n), parse_int_list(args.seeds), keeps)
    try:
        records = run_bench(specs, exact_up_to=args.exact_up_to, timing=args.timing, jobs=args.jobs)
    except BenchFailure as exc:
        _diag(f"error: {exc}")
        return 1
    text = records_to_csv(records)
    if args.csv in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.csv).write_text(text, encoding="utf-8")
    worst = max_ratio(records)
    _diag(f"summary: instances={len(records)} max_ratio={worst if worst is not None else 'n/a'} gate<={RATIO_GATE} ok")
    return 0


def verify_result(g: PortGraph, obj: dict) -> tuple[bool, str | None, str]:
    """Check a stored result against ``g``; returns ``(ok, failing check, detail)``."""
    try:
        D, D1, D2, D3 = (set(obj[k]) for k in ("D", "D1", "D2", "D3"))
    except (KeyError, TypeError):
        return False, "format", "result needs D, D1, D2, D3 lists"
    if not all(0 <= v < g.n for v in D | D1 | D2 | D3):
        return False, "format", "node index out of range"
    dom = is_dominating(g, D)
    if not dom:
        return False, "domination", f"vertex {dom.witness} is not dominated"
    rerun = run_distributed(g)
    if D != D1 | D2 | D3 or (D1 & D2) or (D1 & D3) or (D2 & D3):
        return False, "partition", "D is not the disjoint union of D1, D2, D3"
    for name, mine, ref in (("D1", D1, rerun.D1), ("D2", D2, rerun.D2), ("D3", D3, rerun.D3)):
        if mine != set(ref):
            return False, "partition", f"{name} differs from a fresh run"
    if D != set(rerun.D):
        return False, "reproducibility", "D differs from a fresh run"
    if "rounds" in obj and obj["rounds"] != rerun.stats.rounds_executed:
        return False, "reproducibility", "round count differs from a fresh run"
    return True, None, ""


def cmd_verify(args) -> int:
    g = _load(args.graph)
    try:
        obj = json.loads(Path(args.result).read_text(encoding="utf-8").strip().splitlines()[-1])
    except (OSError, json.JSONDecodeError, IndexError) as exc:
        _diag(f"error: cannot read result {args.result}: {exc}")
        return 2
    ok, check, detail = verify_result(g, obj)
    _emit({"ok": ok, "failed_check": check, "detail": detail})
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pnmds", description="Port-numbering MDS approximation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a planar graph")
    g.add_argument("--family", required=True, choices=FAMILIES)
    for name in ("rows", "cols", "n", "k", "spine", "leaves"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--keep-prob", type=float, default=1.0)
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run the 18-round protocol on a graph file")
    r.add_argument("graph")
    r.add_argument("--trace", action="store_true", help="emit one JSON line per node per round first")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("exact", help="exact minimum dominating set")
    e.add_argument("graph")
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bench", help="batch benchmark to CSV")
    b.add_argument("--family", action="append", required=True, help="family name(s), repeatable or comma-separated")
    b.add_argument("--n", default="3..12", help="sizes, e.g. 3..12 or 5,10,20")
    b.add_argument("--seeds", default="0", help="seeds, e.g. 0..4")
    b.add_argument("--keep-prob", default="1.0", help="comma-separated edge keep probabilities")
    b.add_argument("--exact-up-to", type=int, default=22)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill runtime_ms (makes output non-reproducible)")
    b.add_argument("--csv", "-o", dest="csv")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="re-check a stored run result")
    v.add_argument("graph")
    v.add_argument("result")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        _diag(f"error: {exc}")
        return 2
    except FileNotFoundError as exc:
        _diag(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
