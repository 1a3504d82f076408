"""Anonymous port-numbered graphs.

Every node privately numbers its incident edges ``1..deg(v)``.  Node indices
``0..n-1`` exist for the harness and the file formats only; protocol code never
sees them.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input.  ``edge_index`` names the offending edge when there is one."""

    def __init__(self, message: str, edge_index: int | None = None):
        super().__init__(message)
        self.edge_index = edge_index


@dataclass(frozen=True)
class PortRef:
    node: int
    port: int


@dataclass(frozen=True)
class PlanarityVerdict:
    passed: bool
    excess: int = 0

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class Verdict:
    """``ok`` or a ``witness`` vertex showing why not."""

    ok: bool
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PortGraph:
    """``ports[v][p - 1] == (u, q)`` means port ``p`` of ``v`` leads to port ``q`` of ``u``."""

    ports: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n(self) -> int:
        return len(self.ports)

    @property
    def m(self) -> int:
        return sum(len(p) for p in self.ports) // 2

    def degree(self, v: int) -> int:
        return len(self.ports[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbors of ``v`` in port order."""
        return [u for u, _ in self.ports[v]]

    def closed_neighborhood(self, v: int) -> set[int]:
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range for n={self.n}")
        return {v, *self.neighbors(v)}

    def endpoint(self, ref: PortRef) -> PortRef:
        if not 0 <= ref.node < self.n:
            raise GraphError(f"node {ref.node} out of range")
        if not 1 <= ref.port <= self.degree(ref.node):
            raise GraphError(f"port {ref.port} invalid for node {ref.node} of degree {self.degree(ref.node)}")
        u, q = self.ports[ref.node][ref.port - 1]
        return PortRef(u, q)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as ``(low, high)`` pairs, sorted."""
        return sorted((v, u) for v in range(self.n) for u, _ in self.ports[v] if v < u)

    def degree_sequence(self) -> list[int]:
        return [len(p) for p in self.ports]

    def validate(self) -> None:
        """Raise :class:`GraphError` unless the port structure is a simple graph with a port bijection."""
        for v, plist in enumerate(self.ports):
            seen: set[int] = set()
            for p, (u, q) in enumerate(plist, start=1):
                if not 0 <= u < self.n:
                    raise GraphError(f"port {p} of node {v} points outside the graph")
                if u == v:
                    raise GraphError(f"self-loop at node {v}")
                if u in seen:
                    raise GraphError(f"duplicate edge {v}-{u}")
                seen.add(u)
                if not 1 <= q <= len(self.ports[u]) or self.ports[u][q - 1] != (v, p):
                    raise GraphError(f"port {p} of node {v} is not reciprocated")

    def relabel(self, perm: Sequence[int]) -> PortGraph:
        """Move node ``v`` to ``perm[v]``, keeping every node's port order."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabel needs a permutation of 0..n-1")
        new: list[tuple[tuple[int, int], ...]] = [()] * self.n
        for v, plist in enumerate(self.ports):
            new[perm[v]] = tuple((perm[u], q) for u, q in plist)
        return PortGraph(tuple(new))

    def to_edge_list(self) -> list[tuple[int, int]]:
        """An edge order from which :func:`from_edge_list` rebuilds exactly these ports.

        Each node's incident edges must appear in port order, so this is a topological
        sort of those per-node chains; smallest ``(u, v)`` first among the ready edges.
        Port structures whose chains are cyclic have no edge-list form.
        """
        key = {}
        for v in range(self.n):
            for u, _ in self.ports[v]:
                key.setdefault(frozenset((u, v)), (min(u, v), max(u, v)))
        indeg = {e: 0 for e in key.values()}
        succ: dict[tuple[int, int], list[tuple[int, int]]] = {e: [] for e in indeg}
        for v, plist in enumerate(self.ports):
            chain = [key[frozenset((v, u))] for u, _ in plist]
            for a, b in zip(chain, chain[1:]):
                succ[a].append(b)
                indeg[b] += 1
        ready = [e for e, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            e = heapq.heappop(ready)
            order.append(e)
            for f in succ[e]:
                indeg[f] -= 1
                if indeg[f] == 0:
                    heapq.heappush(ready, f)
        if len(order) != len(indeg):
            raise GraphError("port numbering is not expressible as an edge order")
        return order


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> PortGraph:
    """Build a port graph; each node numbers its edges in input order starting at 1."""
    if n < 0:
        raise GraphError("node count must be non-negative")
    ports: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    seen: set[tuple[int, int]] = set()
    for i, edge in enumerate(edges):
        if len(edge) != 2:
            raise GraphError(f"edge {i}: expected a pair, got {edge!r}", i)
        u, v = int(edge[0]), int(edge[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {i}: endpoint out of range in ({u}, {v}) for n={n}", i)
        if u == v:
            raise GraphError(f"edge {i}: self-loop at node {u}", i)
        k = (min(u, v), max(u, v))
        if k in seen:
            raise GraphError(f"edge {i}: duplicate edge ({u}, {v})", i)
        seen.add(k)
        pu, pv = len(ports[u]) + 1, len(ports[v]) + 1
        ports[u].append((v, pv))
        ports[v].append((u, pu))
    return PortGraph(tuple(tuple(p) for p in ports))


def planarity_bound_check(g: PortGraph) -> PlanarityVerdict:
    """Euler-bound screen: failing certifies non-planarity, passing certifies nothing."""
    bound = 3 * g.n - 6 if g.n >= 3 else max(g.n - 1, 0)
    excess = g.m - bound
    return PlanarityVerdict(passed=excess <= 0, excess=max(excess, 0))


# --- file formats -----------------------------------------------------------

def format_graph(g: PortGraph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.to_edge_list()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> PortGraph:
    n = None
    edges: list[tuple[int, int]] = []
    edge_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2 and n is None:
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3 and n is not None:
                edges.append((int(parts[1]), int(parts[2])))
                edge_lines.append(lineno)
            else:
                raise ValueError
        except ValueError:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise GraphError("missing 'n <count>' header line")
    try:
        return from_edge_list(n, edges)
    except GraphError as exc:
        if exc.edge_index is None:
            raise
        lineno = edge_lines[exc.edge_index]
        raise GraphError(f"line {lineno}: {exc}", exc.edge_index) from None


def graph_to_obj(g: PortGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.to_edge_list()]}


def graph_from_obj(obj: dict) -> PortGraph:
    try:
        return from_edge_list(int(obj["n"]), obj["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"bad graph object: {exc}") from None


def read_graph(path: str | Path) -> PortGraph:
    """Read either the line format or the JSON object format."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            return graph_from_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GraphError(f"line {exc.lineno}: invalid JSON graph object") from None
    return parse_graph(text)


def write_graph(g: PortGraph, path: str | Path, fmt: str = "text") -> None:
    if fmt == "json":
        payload = json.dumps(graph_to_obj(g)) + "\n"
    else:
        payload = format_graph(g)
    Path(path).write_text(payload, encoding="utf-8")
