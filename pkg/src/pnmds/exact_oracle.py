"""Ground truth for small instances: exact MDS by branch-and-bound, plus a greedy baseline."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .port_graph import PortGraph, Verdict

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class OracleResult:
    size: int
    witness: frozenset[int]
    optimal: bool
    nodes_explored: int

    def to_obj(self) -> dict:
        return {"size": self.size, "witness": sorted(self.witness), "optimal": self.optimal}


def is_dominating(g: PortGraph, S: Iterable[int]) -> Verdict:
    S = set(S)
    for v in range(g.n):
        if v not in S and not any(u in S for u in g.neighbors(v)):
            return Verdict(False, v)
    return Verdict(True)


def _closed_masks(g: PortGraph) -> list[int]:
    masks = []
    for v in range(g.n):
        m = 1 << v
        for u in g.neighbors(v):
            m |= 1 << u
        masks.append(m)
    return masks


def greedy_mds(g: PortGraph) -> frozenset[int]:
    """Repeatedly take the vertex covering the most undominated vertices (lowest index on ties)."""
    masks = _closed_masks(g)
    undominated = (1 << g.n) - 1
    chosen: set[int] = set()
    while undominated:
        best = max(range(g.n), key=lambda v: ((masks[v] & undominated).bit_count(), -v))
        chosen.add(best)
        undominated &= ~masks[best]
    return frozenset(chosen)


class _BudgetExhausted(Exception):
    pass


def exact_mds(g: PortGraph, node_budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Minimum dominating set by branch-and-bound.

    Branches on which member of ``N+(u)`` dominates ``u``, where ``u`` is an
    undominated vertex of minimum degree.  The lower bound counts undominated
    vertices with pairwise-disjoint closed neighbourhoods (each needs its own
    dominator), extracted greedily in degree order.  If ``node_budget`` branch
    nodes are used up, the best set found so far is returned with
    ``optimal=False``.
    """
    n = g.n
    masks = _closed_masks(g)
    by_degree = sorted(range(n), key=lambda v: (g.degree(v), v))
    # try candidates that cover more first so good incumbents come early
    cand_order = [sorted(g.closed_neighborhood(u), key=lambda w: (-masks[w].bit_count(), w)) for u in range(n)]

    best = set(greedy_mds(g))
    best_size = len(best)
    explored = 0

    def lower_bound(undominated: int) -> int:
        used = 0
        count = 0
        for v in by_degree:
            if undominated >> v & 1 and not masks[v] & used:
                used |= masks[v]
                count += 1
        return count

    def search(undominated: int, chosen: list[int]) -> None:
        nonlocal best, best_size, explored
        explored += 1
        if explored > node_budget:
            raise _BudgetExhausted
        if not undominated:
            if len(chosen) < best_size:
                best, best_size = set(chosen), len(chosen)
            return
        if len(chosen) + lower_bound(undominated) >= best_size:
            return
        u = next(v for v in by_degree if undominated >> v & 1)
        for w in cand_order[u]:
            chosen.append(w)
            search(undominated & ~masks[w], chosen)
            chosen.pop()

    optimal = True
    try:
        search((1 << n) - 1, [])
    except _BudgetExhausted:
        optimal = False
        explored = node_budget
    return OracleResult(size=best_size, witness=frozenset(best), optimal=optimal, nodes_explored=explored)


def ratio(algo, oracle: OracleResult) -> Fraction:
    """``|D| / |M|`` exactly; ``algo`` is an :class:`MdsResult` or a set size.

    Refuses an oracle that did not certify optimality.
    """
    algo_size = algo if isinstance(algo, int) else len(algo.D)
    if not oracle.optimal:
        raise ValueError("oracle result is not certified optimal")
    if oracle.size < 1:
        raise ValueError("ratio undefined for an empty graph")
    return Fraction(algo_size, oracle.size)
