import inspect
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ceil_log2_plus1
from strategies import planar_or_simple

from pnmds.generators import gen_random_triangulation, gen_star
from pnmds.mds_protocol import PortNumberingMds
from pnmds.port_graph import PortRef, from_edge_list
from pnmds.sync_engine import (
    Message,
    NodeProgram,
    NonTermination,
    ProtocolViolation,
    RunStats,
    Tag,
    assert_congest,
    execute,
    message_bits,
)


class HaltAtInit:
    def init(self, degree):
        return "done"

    def send(self, state, r):
        raise AssertionError("halted nodes must not be stepped")

    def receive(self, state, r, inbox):
        raise AssertionError("halted nodes must not be stepped")

    def halted(self, state):
        return True


@dataclass(frozen=True)
class Counter:
    degree: int
    left: int
    got: tuple = ()


class Broadcast:
    """Sends ``tag`` on every port for ``rounds`` rounds, remembering what arrived."""

    def __init__(self, tag=Tag.DOMINATED, rounds=1):
        self.tag, self.rounds = tag, rounds

    def init(self, degree):
        return Counter(degree, self.rounds)

    def send(self, s, r):
        return [Message(self.tag)] * s.degree

    def receive(self, s, r, inbox):
        return Counter(s.degree, s.left - 1, s.got + (tuple(m is not None for m in inbox),))

    def halted(self, s):
        return s.left == 0


class PortEcho:
    """Round 1: send DELTA(p) on port p.  Each node records (arrival port, payload)."""

    def init(self, degree):
        return (degree, None)

    def send(self, s, r):
        return [Message(Tag.DELTA, p) for p in range(1, s[0] + 1)]

    def receive(self, s, r, inbox):
        return (s[0], tuple(m.payload for m in inbox))

    def halted(self, s):
        return s[1] is not None


class Oversized:
    def init(self, degree):
        return degree

    def send(self, s, r):
        return [Message(Tag.DELTA, 10**6)] * s

    def receive(self, s, r, inbox):
        return s

    def halted(self, s):
        return False


@pytest.mark.parametrize(
    "msg, n, bits",
    [
        (Message(Tag.IN_D), 10, 4),
        (Message(Tag.IN_D), 10**6, 4),
        (Message(Tag.DELTA, 7), 100, 11),
        (Message(Tag.DELTA, 0), 1, 5),
    ],
)
def test_message_bits(msg, n, bits):
    assert message_bits(msg, n) == bits


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 100, 255, 256, 10_000])
def test_message_bits_matches_log_formula(n):
    assert message_bits(Message(Tag.DELTA_X, 0), n) == 4 + ceil_log2_plus1(n)


def test_message_payload_rules():
    with pytest.raises(ValueError):
        Message(Tag.DELTA)
    with pytest.raises(ValueError):
        Message(Tag.IN_D, 3)
    with pytest.raises(ValueError):
        Message(Tag.DELTA_X, -1)
    assert len(Tag) == 9


@pytest.mark.parametrize(
    "max_bits, n, ok",
    [(4, 10, True), (11, 100, True), (12, 100, False)],
)
def test_assert_congest(max_bits, n, ok):
    v = assert_congest(RunStats(1, max_bits, 1), n)
    assert v.ok is ok and v.bits == max_bits


def test_halt_in_init():
    _, stats = execute(from_edge_list(1, []), HaltAtInit(), 5)
    assert stats == RunStats(rounds_executed=1, max_message_bits=0, total_messages=0)


def test_one_round_of_flags():
    states, stats = execute(from_edge_list(2, [(0, 1)]), Broadcast(), 5)
    assert stats.total_messages == 2 and stats.max_message_bits == 4 and stats.rounds_executed == 1
    assert states[0].got == ((True,),) and states[1].got == ((True,),)


def test_delivery_reciprocity():
    g = gen_random_triangulation(30, 5, 0.7)
    states, _ = execute(g, PortEcho(), 2)
    for v in range(g.n):
        for q, payload in enumerate(states[v][1], start=1):
            # what arrived on port q of v was sent on the reciprocal port of the neighbour
            sender = g.endpoint(PortRef(v, q))
            assert payload == sender.port


def test_non_termination_reported():
    with pytest.raises(NonTermination) as exc:
        execute(gen_star(2), Broadcast(rounds=10), 3)
    assert exc.value.max_rounds == 3


def test_payload_above_n_rejected():
    with pytest.raises(ProtocolViolation):
        execute(gen_star(2), Oversized(), 3)


def test_max_rounds_must_be_positive():
    with pytest.raises(ValueError):
        execute(gen_star(1), Broadcast(), 0)


@settings(max_examples=40, deadline=None)
@given(planar_or_simple, st.integers(0, 1000))
def test_evaluation_order_does_not_matter(g, seed):
    base_states, base_stats = execute(g, PortNumberingMds(), 18)
    states, stats = execute(g, PortNumberingMds(), 18, shuffle_seed=seed)
    assert states == base_states and stats == base_stats


def test_concurrent_evaluation_matches_serial():
    g = gen_random_triangulation(200, 11, 0.8)
    serial = execute(g, PortNumberingMds(), 18)
    with ThreadPoolExecutor(4) as pool:
        threaded = execute(g, PortNumberingMds(), 18, executor=pool, shuffle_seed=3)
    assert serial == threaded


def test_determinism_across_runs():
    g = gen_random_triangulation(80, 2)
    seen = []
    for _ in range(2):
        trail = []
        execute(g, PortNumberingMds(), 18, observer=lambda r, states: trail.append(tuple(states)))
        seen.append(trail)
    assert seen[0] == seen[1]


def test_program_interface_is_anonymous():
    # the only inputs a node program ever receives: degree, round index, port-indexed inbox
    assert list(inspect.signature(NodeProgram.init).parameters) == ["self", "degree"]
    assert list(inspect.signature(NodeProgram.send).parameters) == ["self", "state", "round_index"]
    assert list(inspect.signature(NodeProgram.receive).parameters) == ["self", "state", "round_index", "inbox"]
    program = PortNumberingMds()
    for name in ("init", "send", "receive", "halted"):
        assert len(inspect.signature(getattr(program, name)).parameters) == len(
            inspect.signature(getattr(NodeProgram, name)).parameters
        ) - 1


def test_trace_lines(tmp_path):
    import io
    import json

    buf = io.StringIO()
    g = gen_star(3)
    execute(g, PortNumberingMds(), 18, trace=buf)
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert len(lines) == 18 * g.n
    assert {rec["round"] for rec in lines} == set(range(1, 19))
    r3 = [rec for rec in lines if rec["round"] == 3 and rec["node"] == 0][0]
    assert r3["sent"] == [["DELTA", 4]] * 3
