"""Batch benchmark: run the protocol over generated instances and gate every run."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Iterable, Optional

from .exact_oracle import exact_mds, greedy_mds, is_dominating, ratio
from .generators import FamilySpec, generate, spec_for_size
from .mds_protocol import ROUNDS, run_distributed
from .sync_engine import assert_congest

RATIO_GATE = 636


@dataclass(frozen=True)
class BenchRecord:
    family: str
    parameters: str
    seed: int
    n: int
    m: int
    d1_size: int
    d2_size: int
    d3_size: int
    d_size: int
    exact_size: Optional[int]
    greedy_size: int
    ratio: Optional[str]
    rounds: int
    max_message_bits: int
    runtime_ms: Optional[float]


COLUMNS = [f.name for f in fields(BenchRecord)]


class BenchFailure(RuntimeError):
    def __init__(self, gate: str, spec: FamilySpec, detail: str):
        super().__init__(
            f"{gate} gate failed on family={spec.family} params={spec.param_string()} "
            f"seed={spec.seed} keep_prob={spec.edge_keep_prob}: {detail}"
        )
        self.gate = gate
        self.spec = spec
        self.detail = detail

    def __reduce__(self):
        return (BenchFailure, (self.gate, self.spec, self.detail))


def run_instance(spec: FamilySpec, exact_up_to: int = 22, timing: bool = False, budget: int = 10**7) -> BenchRecord:
    g = generate(spec)
    t0 = time.perf_counter()
    res = run_distributed(g)
    elapsed = (time.perf_counter() - t0) * 1000.0

    dom = is_dominating(g, res.D)
    if not dom:
        raise BenchFailure("domination", spec, f"vertex {dom.witness} undominated")
    if res.stats.rounds_executed != ROUNDS:
        raise BenchFailure("rounds", spec, f"{res.stats.rounds_executed} rounds")
    congest = assert_congest(res.stats, g.n)
    if not congest:
        raise BenchFailure("congest", spec, f"{congest.bits} bits > budget {congest.budget}")

    exact_size = None
    r: Optional[Fraction] = None
    if g.n <= exact_up_to:
        oracle = exact_mds(g, budget)
        exact_size = oracle.size
        if oracle.optimal and oracle.size > 0:
            r = ratio(res, oracle)
            if r > RATIO_GATE:
                raise BenchFailure("ratio", spec, f"|D|/|M| = {r}")

    return BenchRecord(
        family=spec.family,
        parameters=spec.param_string() + (f";keep={spec.edge_keep_prob}" if spec.edge_keep_prob != 1.0 else ""),
        seed=spec.seed,
        n=g.n,
        m=g.m,
        d1_size=len(res.D1),
        d2_size=len(res.D2),
        d3_size=len(res.D3),
        d_size=len(res.D),
        exact_size=exact_size,
        greedy_size=len(greedy_mds(g)),
        ratio=None if r is None else str(r),
        rounds=res.stats.rounds_executed,
        max_message_bits=res.stats.max_message_bits,
        runtime_ms=round(elapsed, 3) if timing else None,
    )


def bench_specs(
    families: Iterable[str], sizes: Iterable[int], seeds: Iterable[int], keep_probs: Iterable[float] = (1.0,)
) -> list[FamilySpec]:
    sizes, seeds, keep_probs = list(sizes), list(seeds), list(keep_probs)
    return [
        spec_for_size(f, n, s, k) for f in families for n in sizes for s in seeds for k in keep_probs
    ]


def _run_one(args):
    return run_instance(*args)


def run_bench(
    specs: list[FamilySpec], exact_up_to: int = 22, timing: bool = False, jobs: int = 1
) -> list[BenchRecord]:
    work = [(s, exact_up_to, timing) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            records = list(pool.map(_run_one, work, chunksize=8))
    else:
        records = [_run_one(w) for w in work]
    records.sort(key=lambda r: (r.family, r.n, r.seed, r.parameters))
    return records


def max_ratio(records: Iterable[BenchRecord]) -> Optional[Fraction]:
    rs = [Fraction(r.ratio) for r in records if r.ratio is not None]
    return max(rs) if rs else None


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: "" if v is None else v for k, v in asdict(r).items()})
    return buf.getvalue()
