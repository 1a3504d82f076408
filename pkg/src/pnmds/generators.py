"""Planar-by-construction graph families, deterministic given their parameters and seed."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import isqrt

from .port_graph import PortGraph, from_edge_list

FAMILIES = ("grid", "cycle", "star", "caterpillar", "shared_hub", "triangulation")


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    _check(rows >= 1 and cols >= 1, "grid dimensions must be >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return edges


def gen_grid(rows: int, cols: int) -> PortGraph:
    return from_edge_list(rows * cols, grid_edges(rows, cols))


def gen_cycle(n: int) -> PortGraph:
    _check(n >= 3, "cycle needs n >= 3")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def gen_star(k: int) -> PortGraph:
    """K_{1,k} with the center at index 0."""
    _check(k >= 0, "star needs k >= 0")
    return from_edge_list(k + 1, [(0, i) for i in range(1, k + 1)])


def caterpillar_edges(spine: int, leaves_per: int) -> tuple[int, list[tuple[int, int]]]:
    _check(spine >= 1 and leaves_per >= 0, "caterpillar needs spine >= 1, leaves_per >= 0")
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for hub in range(spine):
        for _ in range(leaves_per):
            edges.append((hub, nxt))
            nxt += 1
    return nxt, edges


def gen_caterpillar(spine: int, leaves_per: int) -> PortGraph:
    """Spine path ``0..spine-1``, each hub carrying ``leaves_per`` pendant leaves."""
    n, edges = caterpillar_edges(spine, leaves_per)
    return from_edge_list(n, edges)


def gen_shared_hub(k: int) -> PortGraph:
    """K_{2,k}: hubs 0 and 1, both adjacent to clients ``2..k+1``.

    Every client sees the same two hubs, the large-common-neighbourhood shape
    that makes naive highest-degree selection pick many redundant vertices.
    """
    _check(k >= 1, "shared_hub needs k >= 1")
    edges = [(0, c) for c in range(2, k + 2)] + [(1, c) for c in range(2, k + 2)]
    return from_edge_list(k + 2, edges)


def triangulation_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """Apollonian insertion: each new vertex goes into a uniform random inner face."""
    _check(n >= 3, "triangulation needs n >= 3")
    edges = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2)]
    for v in range(3, n):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        edges += [(a, v), (b, v), (c, v)]
        faces[i] = (a, b, v)
        faces += [(b, c, v), (a, c, v)]
    return edges


def gen_random_triangulation(n: int, seed: int, edge_keep_prob: float = 1.0) -> PortGraph:
    rng = random.Random(seed)
    edges = triangulation_edges(n, rng)
    return from_edge_list(n, _subsample(edges, edge_keep_prob, rng))


def _subsample(edges: list[tuple[int, int]], keep: float, rng: random.Random) -> list[tuple[int, int]]:
    _check(0.0 < keep <= 1.0, "edge_keep_prob must be in (0, 1]")
    if keep == 1.0:
        return edges
    return [e for e in edges if rng.random() < keep]


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    edge_keep_prob: float = 1.0

    def __post_init__(self):
        _check(self.family in FAMILIES, f"unknown family {self.family!r}")
        _check(0 <= self.seed < 2**64, "seed must be a 64-bit natural")
        _check(0.0 < self.edge_keep_prob <= 1.0, "edge_keep_prob must be in (0, 1]")

    def param_string(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))


def _base_edges(spec: FamilySpec, rng: random.Random) -> tuple[int, list[tuple[int, int]]]:
    p = spec.params
    f = spec.family
    if f == "grid":
        return p["rows"] * p["cols"], grid_edges(p["rows"], p["cols"])
    if f == "cycle":
        _check(p["n"] >= 3, "cycle needs n >= 3")
        return p["n"], [(i, (i + 1) % p["n"]) for i in range(p["n"])]
    if f == "star":
        g = gen_star(p["k"])
        return g.n, g.to_edge_list()
    if f == "caterpillar":
        return caterpillar_edges(p["spine"], p["leaves"])
    if f == "shared_hub":
        g = gen_shared_hub(p["k"])
        return g.n, g.to_edge_list()
    return p["n"], triangulation_edges(p["n"], rng)


def generate(spec: FamilySpec) -> PortGraph:
    """Build the graph described by ``spec``, then keep each edge with probability ``edge_keep_prob``."""
    rng = random.Random(spec.seed)
    try:
        n, edges = _base_edges(spec, rng)
    except KeyError as exc:
        raise ValueError(f"{spec.family} needs parameter {exc.args[0]!r}") from None
    return from_edge_list(n, _subsample(edges, spec.edge_keep_prob, rng))


def spec_for_size(family: str, n: int, seed: int = 0, edge_keep_prob: float = 1.0) -> FamilySpec:
    """A spec of ``family`` with roughly ``n`` vertices (exact except for grid and caterpillar)."""
    if family == "grid":
        rows = max(1, isqrt(n))
        params = {"rows": rows, "cols": max(1, n // rows)}
    elif family == "cycle":
        params = {"n": max(3, n)}
    elif family == "star":
        params = {"k": max(0, n - 1)}
    elif family == "caterpillar":
        leaves = 1 + seed % 3
        params = {"spine": max(1, n // (leaves + 1)), "leaves": leaves}
    elif family == "shared_hub":
        params = {"k": max(1, n - 2)}
    elif family == "triangulation":
        params = {"n": max(3, n)}
    else:
        raise ValueError(f"unknown family {family!r}")
    return FamilySpec(family, params, seed, edge_keep_prob)
