"""Constant-round MDS approximation for anonymous port-numbered planar networks.

Two Hop2Dominate blocks followed by one repair step:

* Hop2Dominate(D): every node computes its residual degree
  ``|N+(v) \\ N+(D)|``; every node outside ``D`` picks ``x(v)``, a maximizer of
  residual degree in ``N+(v)``; the picked nodes form ``X``; every member of
  ``X`` picks ``d(v)``, a maximizer of ``|N+(w) & X|`` in ``N+(v)``; the picked
  nodes join ``D``.
* Repair: every still-undominated node picks ``w(v)``, a dominated non-member
  neighbour of maximum residual degree, and ``w(v)`` joins ``D``.

Every "pick a maximizer" uses the same rule: self if self attains the maximum,
otherwise the lowest local port attaining it.

The distributed form runs as a :class:`~pnmds.sync_engine.NodeProgram` with a
fixed 18-round schedule (rounds 1-7 and 8-14 are the two blocks, 15-18 the
repair).  :func:`reference_mds` is the centralized re-statement used for
differential testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .port_graph import PortGraph, Verdict
from .sync_engine import (
    Inbox,
    Message,
    ProtocolViolation,
    RunStats,
    Tag,
    assert_congest,
    execute,
)

SELF = 0
ROUNDS = 18
BLOCK_ROUNDS = 7
PHASES = ("D1", "D2", "D3")


def local_argmax(own: Optional[int], values: Sequence[int], allowed: Sequence[bool] | None = None) -> Optional[int]:
    """Tie-broken maximizer over a closed neighbourhood.

    ``own`` is the node's own value (``None`` when the node itself is not a
    candidate); ``values[p - 1]`` is the value seen on port ``p``.  Returns
    :data:`SELF`, a port number, or ``None`` if there is no candidate at all.
    """
    best = own
    for p, val in enumerate(values):
        if (allowed is None or allowed[p]) and (best is None or val > best):
            best = val
    if best is None:
        return None
    if own is not None and own == best:
        return SELF
    for p, val in enumerate(values):
        if (allowed is None or allowed[p]) and val == best:
            return p + 1
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class MdsNodeState:
    degree: int
    in_D: bool = False
    dominated: bool = False
    in_X: bool = False
    residual_degree: int = 0
    x_degree: int = 0
    x_choice: Optional[int] = None
    d_choice: Optional[int] = None
    w_choice: Optional[int] = None
    nbr_in_D: tuple[bool, ...] = ()
    nbr_dominated: tuple[bool, ...] = ()
    nbr_delta: tuple[int, ...] = ()
    nbr_delta_x: tuple[int, ...] = ()
    joined_in: Optional[str] = None
    done: bool = False


def replace(s: MdsNodeState, **changes) -> MdsNodeState:
    # dataclasses.replace re-runs __init__; this is the hot path of every round
    new = object.__new__(MdsNodeState)
    new.__dict__.update(s.__dict__)
    new.__dict__.update(changes)
    return new


_FLAG = {t: Message(t) for t in Tag if t not in (Tag.DELTA, Tag.DELTA_X)}


def _schedule(r: int) -> tuple[str, int]:
    """Map a round index to ``(phase, step)``; steps 1..7 in a block, 1..4 in the repair."""
    if 1 <= r <= 2 * BLOCK_ROUNDS:
        return PHASES[(r - 1) // BLOCK_ROUNDS], (r - 1) % BLOCK_ROUNDS + 1
    if r <= ROUNDS:
        return "D3", r - 2 * BLOCK_ROUNDS
    raise ProtocolViolation(f"round {r} is past the {ROUNDS}-round schedule")


def _flags(inbox: Inbox, tag: Tag) -> tuple[bool, ...]:
    out = []
    for m in inbox:
        if m is not None and m.tag != tag:
            raise ProtocolViolation(f"expected {tag.name}, got {m.tag.name}")
        out.append(m is not None)
    return tuple(out)


def _values(inbox: Inbox, tag: Tag) -> tuple[int, ...]:
    out = []
    for m in inbox:
        if m is None or m.tag != tag:
            raise ProtocolViolation(f"expected {tag.name} on every port")
        out.append(m.payload)
    return tuple(out)


def _join(s: MdsNodeState, phase: str) -> MdsNodeState:
    return replace(s, in_D=True, dominated=True, joined_in=s.joined_in or phase)


class PortNumberingMds:
    """The distributed node program.  Stateless; all state lives in :class:`MdsNodeState`."""

    def init(self, degree: int) -> MdsNodeState:
        return MdsNodeState(degree=degree)

    def halted(self, state: MdsNodeState) -> bool:
        return state.done

    def send(self, s: MdsNodeState, r: int) -> list[Optional[Message]]:
        phase, step = _schedule(r)
        out: list[Optional[Message]] = [None] * s.degree
        if step == 1:
            if s.in_D:
                out = [_FLAG[Tag.IN_D]] * s.degree
        elif step == 2:
            if s.dominated:
                out = [_FLAG[Tag.DOMINATED]] * s.degree
        elif step == 3:
            out = [Message(Tag.DELTA, s.residual_degree)] * s.degree
        elif phase == "D3":
            if s.w_choice is not None:
                out[s.w_choice - 1] = _FLAG[Tag.CHOOSE_W]
        elif step == 4:
            if s.x_choice not in (None, SELF):
                out[s.x_choice - 1] = _FLAG[Tag.CHOOSE_X]
        elif step == 5:
            if s.in_X:
                out = [_FLAG[Tag.IN_X]] * s.degree
        elif step == 6:
            out = [Message(Tag.DELTA_X, s.x_degree)] * s.degree
        elif step == 7:
            if s.in_X and s.d_choice != SELF:
                out[s.d_choice - 1] = _FLAG[Tag.CHOOSE_D]
        return out

    def receive(self, s: MdsNodeState, r: int, inbox: Inbox) -> MdsNodeState:
        phase, step = _schedule(r)
        if step == 1:
            nbr = _flags(inbox, Tag.IN_D)
            return replace(s, nbr_in_D=nbr, dominated=s.in_D or any(nbr), in_X=False, x_choice=None, d_choice=None)
        if step == 2:
            nbr = _flags(inbox, Tag.DOMINATED)
            residual = (not s.dominated) + sum(not d for d in nbr)
            return replace(s, nbr_dominated=nbr, residual_degree=residual)
        if step == 3:
            nbr = _values(inbox, Tag.DELTA)
            if phase == "D3":
                if s.dominated:
                    return replace(s, nbr_delta=nbr)
                # dominated non-members of N+(v); v itself is undominated so never a candidate
                allowed = [d and not i for d, i in zip(s.nbr_dominated, s.nbr_in_D)]
                w = local_argmax(None, nbr, allowed)
                if w is None:
                    raise ProtocolViolation("undominated node has no dominated neighbour")
                return replace(s, nbr_delta=nbr, w_choice=w)
            if s.in_D:
                return replace(s, nbr_delta=nbr, x_choice=None, in_X=False)
            x = local_argmax(s.residual_degree, nbr)
            return replace(s, nbr_delta=nbr, x_choice=x, in_X=x == SELF)
        if phase == "D3":
            chosen = any(_flags(inbox, Tag.CHOOSE_W))
            s = _join(s, "D3") if chosen else s
            return replace(s, done=True)
        if step == 4:
            return replace(s, in_X=s.in_X or any(_flags(inbox, Tag.CHOOSE_X)))
        if step == 5:
            return replace(s, x_degree=s.in_X + sum(_flags(inbox, Tag.IN_X)))
        if step == 6:
            nbr = _values(inbox, Tag.DELTA_X)
            d = local_argmax(s.x_degree, nbr) if s.in_X else None
            return replace(s, nbr_delta_x=nbr, d_choice=d)
        # step 7
        chosen = any(_flags(inbox, Tag.CHOOSE_D)) or (s.in_X and s.d_choice == SELF)
        return _join(s, phase) if chosen else s


@dataclass(frozen=True)
class MdsResult:
    D: frozenset[int]
    D1: frozenset[int]
    D2: frozenset[int]
    D3: frozenset[int]
    stats: Optional[RunStats] = field(default=None, compare=False)
    # D after rounds 7 and 14 (distributed runs only)
    checkpoints: dict = field(default_factory=dict, compare=False, repr=False)

    def same_sets(self, other: MdsResult) -> bool:
        return (self.D, self.D1, self.D2, self.D3) == (other.D, other.D1, other.D2, other.D3)

    def to_obj(self) -> dict:
        obj = {k: sorted(getattr(self, k)) for k in ("D", "D1", "D2", "D3")}
        if self.stats is not None:
            obj["rounds"] = self.stats.rounds_executed
            obj["max_message_bits"] = self.stats.max_message_bits
        return obj


def run_distributed(g: PortGraph, **engine_kwargs) -> MdsResult:
    """Run the 18-round protocol on ``g``; extra keyword arguments go to :func:`execute`."""
    checkpoints: dict[int, frozenset[int]] = {}
    user_observer = engine_kwargs.pop("observer", None)

    def observer(r, states):
        if r in (BLOCK_ROUNDS, 2 * BLOCK_ROUNDS):
            checkpoints[r] = frozenset(v for v, s in enumerate(states) if s.in_D)
        if user_observer is not None:
            user_observer(r, states)

    states, stats = execute(g, PortNumberingMds(), ROUNDS, observer=observer, **engine_kwargs)
    verdict = assert_congest(stats, g.n)
    if not verdict:
        raise ProtocolViolation(f"message of {verdict.bits} bits exceeds CONGEST budget {verdict.budget}")
    parts = {p: frozenset(v for v, s in enumerate(states) if s.joined_in == p) for p in PHASES}
    return MdsResult(
        D=frozenset(v for v, s in enumerate(states) if s.in_D),
        D1=parts["D1"],
        D2=parts["D2"],
        D3=parts["D3"],
        stats=stats,
        checkpoints=checkpoints,
    )


# --- centralized reference --------------------------------------------------

def _dominated_by(g: PortGraph, D: set[int] | frozenset[int]) -> set[int]:
    out = set(D)
    for v in D:
        out.update(g.neighbors(v))
    return out


def _residual_degrees(g: PortGraph, dominated: set[int]) -> list[int]:
    return [(v not in dominated) + sum(u not in dominated for u in g.neighbors(v)) for v in range(g.n)]


def _resolve(g: PortGraph, v: int, choice: int) -> int:
    return v if choice == SELF else g.ports[v][choice - 1][0]


def hop2_dominate_ref(g: PortGraph, D: set[int] | frozenset[int]) -> frozenset[int]:
    """Centralized Hop2Dominate(G, D); returns the newly chosen set (may overlap ``D``)."""
    D = set(D)
    residual = _residual_degrees(g, _dominated_by(g, D))
    X: set[int] = set()
    for v in range(g.n):
        if v not in D:
            c = local_argmax(residual[v], [residual[u] for u in g.neighbors(v)])
            X.add(_resolve(g, v, c))
    x_degree = [(v in X) + sum(u in X for u in g.neighbors(v)) for v in range(g.n)]
    new: set[int] = set()
    for v in sorted(X):
        c = local_argmax(x_degree[v], [x_degree[u] for u in g.neighbors(v)])
        new.add(_resolve(g, v, c))
    return frozenset(new)


def repair_ref(g: PortGraph, D: set[int] | frozenset[int]) -> frozenset[int]:
    """``{w(v) : v undominated}`` for the current ``D``."""
    dominated = _dominated_by(g, D)
    residual = _residual_degrees(g, dominated)
    out: set[int] = set()
    for v in range(g.n):
        if v in dominated:
            continue
        nbrs = g.neighbors(v)
        allowed = [u in dominated and u not in D for u in nbrs]
        c = local_argmax(None, [residual[u] for u in nbrs], allowed)
        if c is None:
            raise ProtocolViolation(f"node {v} has no dominated neighbour")
        out.add(_resolve(g, v, c))
    return frozenset(out)


def reference_mds(g: PortGraph) -> MdsResult:
    D1 = hop2_dominate_ref(g, frozenset())
    D = set(D1)
    D2 = hop2_dominate_ref(g, D) - D
    D |= D2
    D3 = repair_ref(g, D)
    D |= D3
    return MdsResult(D=frozenset(D), D1=D1, D2=frozenset(D2), D3=D3)


def two_hop_check(g: PortGraph, D: set[int] | frozenset[int]) -> Verdict:
    """Whether every vertex is within distance 2 of ``D``; the witness is the smallest one that is not."""
    near = _dominated_by(g, D)
    reach = set(near)
    for v in near:
        reach.update(g.neighbors(v))
    for v in range(g.n):
        if v not in reach:
            return Verdict(False, v)
    return Verdict(True)
