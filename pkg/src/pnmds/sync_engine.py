"""Synchronous round-by-round execution of anonymous node programs.

A round is the textbook port-numbering step: every running node emits at most
one message per port from its current state, all messages are delivered to the
reciprocal ports, then every running node updates its state from what it got.
Programs see their degree, the round index and port-indexed inboxes, nothing
else.  Message sizes are metered bit-exactly against the CONGEST budget.
"""

from __future__ import annotations

import enum
import hashlib
import json
import random
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, Callable, Optional, Protocol, Sequence, TextIO

from .port_graph import PortGraph

TAG_BITS = 4


class Tag(enum.IntEnum):
    IN_D = 0
    DOMINATED = 1
    DELTA = 2
    CHOOSE_X = 3
    IN_X = 4
    DELTA_X = 5
    CHOOSE_D = 6
    JOIN_D = 7
    CHOOSE_W = 8


PAYLOAD_TAGS = frozenset({Tag.DELTA, Tag.DELTA_X})
assert len(Tag) <= 2**TAG_BITS


@dataclass(frozen=True)
class Message:
    tag: Tag
    payload: Optional[int] = None

    def __post_init__(self):
        if (self.payload is not None) != (self.tag in PAYLOAD_TAGS):
            raise ValueError(f"{self.tag.name} {'requires' if self.tag in PAYLOAD_TAGS else 'forbids'} a payload")
        if self.payload is not None and self.payload < 0:
            raise ValueError("payload must be a natural number")


Outbox = Sequence[Optional[Message]]
Inbox = Sequence[Optional[Message]]


class NodeProgram(Protocol):
    """Anonymous node behaviour.  All methods must be pure functions of their arguments.

    ``send`` returns one optional message per port (index ``p - 1`` for port ``p``);
    ``receive`` gets the messages that arrived on each port in the same round.
    """

    def init(self, degree: int) -> Any: ...

    def send(self, state: Any, round_index: int) -> Outbox: ...

    def receive(self, state: Any, round_index: int, inbox: Inbox) -> Any: ...

    def halted(self, state: Any) -> bool: ...


@dataclass(frozen=True)
class RunStats:
    rounds_executed: int
    max_message_bits: int
    total_messages: int


@dataclass(frozen=True)
class CongestVerdict:
    ok: bool
    bits: int
    budget: int

    def __bool__(self) -> bool:
        return self.ok


class ProtocolViolation(RuntimeError):
    pass


class NonTermination(RuntimeError):
    def __init__(self, max_rounds: int, running: int):
        super().__init__(f"{running} node(s) still running after {max_rounds} rounds")
        self.max_rounds = max_rounds
        self.running = running


def payload_bits(n: int) -> int:
    # ceil(log2(n + 1)) for n >= 0
    return n.bit_length()


def congest_budget(n: int) -> int:
    return TAG_BITS + payload_bits(n)


def message_bits(m: Message, n: int) -> int:
    return TAG_BITS + (payload_bits(n) if m.payload is not None else 0)


def assert_congest(stats: RunStats, n: int) -> CongestVerdict:
    budget = congest_budget(n)
    return CongestVerdict(stats.max_message_bits <= budget, stats.max_message_bits, budget)


def state_digest(state: Any) -> str:
    return hashlib.sha1(repr(state).encode()).hexdigest()[:12]


RoundObserver = Callable[[int, Sequence[Any]], None]


def execute(
    g: PortGraph,
    program: NodeProgram,
    max_rounds: int,
    *,
    order: Sequence[int] | None = None,
    shuffle_seed: int | None = None,
    executor: Executor | None = None,
    observer: RoundObserver | None = None,
    trace: TextIO | None = None,
) -> tuple[list[Any], RunStats]:
    """Run ``program`` on every node of ``g`` until all halt.

    ``order`` / ``shuffle_seed`` fix the node evaluation order and ``executor``
    evaluates node steps concurrently; none of them may change the result.
    ``observer(r, states)`` is called after round ``r``.  With ``trace``, one JSON
    line per node per round is written (round, node, state digest, messages sent).
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    n = g.n
    if order is None:
        order = list(range(n))
        if shuffle_seed is not None:
            random.Random(shuffle_seed).shuffle(order)
    elif sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the nodes")

    def par_map(fn, items):
        if executor is None:
            return [fn(v) for v in items]
        return list(executor.map(fn, items))

    states: list[Any] = [None] * n
    for v, s in zip(order, par_map(lambda v: program.init(g.degree(v)), order)):
        states[v] = s

    budget_bits = payload_bits(n)
    rounds = 0
    max_bits = 0
    total = 0
    while True:
        running = [v for v in order if not program.halted(states[v])]
        if rounds > 0 and not running:
            break
        if rounds == max_rounds:
            raise NonTermination(max_rounds, len(running))
        rounds += 1
        r = rounds

        inbox: list[list[Optional[Message]]] = [[None] * g.degree(v) for v in range(n)]
        sent: dict[int, list] = {}
        for v, out in zip(running, par_map(lambda v: program.send(states[v], r), running)):
            out = list(out)
            if len(out) != g.degree(v):
                raise ProtocolViolation(f"round {r}: outbox length {len(out)} != degree {g.degree(v)}")
            plist = g.ports[v]
            for p, msg in enumerate(out):
                if msg is None:
                    continue
                if msg.payload is not None and msg.payload > n:
                    raise ProtocolViolation(f"round {r}: payload {msg.payload} exceeds n={n}")
                bits = TAG_BITS + (budget_bits if msg.payload is not None else 0)
                max_bits = max(max_bits, bits)
                total += 1
                u, q = plist[p]
                inbox[u][q - 1] = msg
            if trace is not None:
                sent[v] = [None if m is None else [m.tag.name, m.payload] for m in out]

        for v, s in zip(running, par_map(lambda v: program.receive(states[v], r, inbox[v]), running)):
            states[v] = s

        if trace is not None:
            for v in sorted(running):
                trace.write(json.dumps({"round": r, "node": v, "state": state_digest(states[v]), "sent": sent.get(v)}) + "\n")
        if observer is not None:
            observer(r, states)

    return states, RunStats(rounds, max_bits, total)
