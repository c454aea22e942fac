from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canstream import (
    DataSym,
    IdSym,
    ScenarioError,
    TimedStream,
    run_can_only,
    run_scenario,
)
from canstream.fuzzing import random_scenario, seeded_scenario
from canstream.system import delivery_log
from .conftest import amsg, scenario


def cells(trace, family, node=1):
    if family == "wr":
        return [list(c) for c in trace.wire.cells]
    return [list(c) for c in trace.node_stream(family, node).cells]


def test_golden_single_node_full_unroll(golden_scenario):
    """Every stream of the canonical one-message run, tick by tick."""
    m = amsg(5, b"\xab")
    t = run_scenario(golden_scenario)
    assert cells(t, "a") == [[m], [], [], [], [], []]
    assert cells(t, "as") == [[], [m], [], [], [], []]
    assert cells(t, "ms") == [[], [IdSym(5)], [DataSym(b"\xab")], [], [], []]
    assert cells(t, "ws") == [[], [IdSym(5)], [DataSym(b"\xab")], [], [], []]
    assert cells(t, "wr") == [[], [], [IdSym(5)], [DataSym(b"\xab")], [], []]
    assert cells(t, "mr") == cells(t, "wr")
    assert cells(t, "ar") == [[], [], [], [m], [], []]
    assert cells(t, "r") == [[0], [], [], [0], [], []]
    assert t.rows == ((1,), (2,), (4,), (1,), (1,), (1,))


def test_two_node_race_loser_retries(two_node_scenario):
    t = run_scenario(two_node_scenario)
    assert delivery_log(t, 1) == [(3, amsg(3, b"\xaa")), (5, amsg(5, b"\xbb"))]
    assert delivery_log(t, 2) == delivery_log(t, 1)
    # the loser re-offers its slot at the next odd tick
    assert cells(t, "as", 2)[3] == [amsg(5, b"\xbb")]
    assert t.rows[2] == (4, 5)  # winner transmits, loser swallows


def test_quiescent_system():
    t = run_scenario(scenario(2, 4))
    for family in ("as", "ar", "ms", "mr", "ws", "r"):
        for node in (1, 2):
            flat = [c for c in t.node_stream(family, node).cells if c]
            if family == "r":
                assert flat == [(0,)]  # the bootstrap priming request
            else:
                assert flat == []


def test_determinism(two_node_scenario):
    assert run_scenario(two_node_scenario) == run_scenario(two_node_scenario)


def test_invalid_scenario_rejected():
    bad = scenario(1, 4, (1, 9, 5, b""))  # injection beyond horizon
    with pytest.raises(ScenarioError):
        run_scenario(bad)


def test_zero_horizon_runs_empty():
    t = run_scenario(scenario(2, 0))
    assert t.horizon == 0
    assert t.rows == ()


def test_backlog_drains_in_priority_order():
    s = scenario(1, 14, (1, 0, 9, b"\x01"), (1, 1, 7, b"\x02"), (1, 2, 2, b"\x03"))
    t = run_scenario(s)
    # id 9 is committed first; the handoff after its frame picks the smallest
    # waiting id, including the message arriving in the handoff tick itself
    assert [(tick, m.id) for tick, m in delivery_log(t)] == [(3, 9), (5, 2), (7, 7)]


def test_handoff_with_empty_queue_keeps_node_ready():
    s = scenario(1, 10, (1, 0, 9, b"\x01"), (1, 3, 2, b"\x03"))
    t = run_scenario(s)
    # frame of 9 runs t=1..2; the handoff at t=2 finds an empty queue, so the
    # tick-3 arrival commits immediately and goes out in the next frame
    assert [(tick, m.id) for tick, m in delivery_log(t)] == [(3, 9), (7, 2)]


def test_idle_node_wakes_up_for_late_traffic():
    s = scenario(1, 20, (1, 0, 1, b"\x01"), (1, 11, 2, b"\x02"))
    t = run_scenario(s)
    assert [(tick, m.id) for tick, m in delivery_log(t)] == [(3, 1), (15, 2)]


def test_delayed_bootstrap_holds_traffic_then_pops_by_priority():
    from canstream.oracle import compare_with_simulator

    s = scenario(1, 12, (1, 1, 9, b"\x01"), (1, 3, 2, b"\x02"),
                 bootstrap_request_tick=4)
    t = run_scenario(s)
    assert [(tick, m.id) for tick, m in delivery_log(t)] == [(7, 2), (9, 9)]
    assert compare_with_simulator(s).equivalent


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_internal_guarantees_on_random_runs(rng):
    from canstream import check_all

    s = random_scenario(rng, nodes=rng.randint(1, 4), horizon=24)
    t = run_scenario(s)
    report = check_all(t, predicates=("msg1", "format", "wire", "row3", "structural"))
    assert report.ok(), report.violations[:3]
    for node in range(1, s.node_count + 1):
        assert cells(t, "mr", node) == cells(t, "wr")


def test_seeded_scenarios_are_reproducible():
    a = seeded_scenario(42, 7, nodes=3, horizon=64)
    b = seeded_scenario(42, 7, nodes=3, horizon=64)
    assert a == b


# -- driving the protocol layer directly -------------------------------------------

def _stream(horizon, **at):
    out = [[] for _ in range(horizon)]
    for tick, msg in at.items():
        out[int(tick[1:])] = [msg]
    return TimedStream.of(out)


def test_can_only_single_offer():
    a1 = _stream(6, t1=amsg(7, b"p"))
    a2 = _stream(6)
    t = run_can_only([a1, a2])
    for node in (1, 2):
        assert delivery_log(t, node) == [(3, amsg(7, b"p"))]
    assert cells(t, "r", 1)[3] == [0]
    assert cells(t, "r", 2)[3] == []


def test_can_only_empty_streams_deliver_nothing():
    t = run_can_only([_stream(6), _stream(6)])
    assert delivery_log(t, 1) == [] and delivery_log(t, 2) == []


def test_can_only_arbitration_picks_min_id():
    t = run_can_only([_stream(6, t1=amsg(4, b"p")), _stream(6, t1=amsg(2, b"q"))])
    assert delivery_log(t, 1) == [(3, amsg(2, b"q"))]


def test_can_only_rejects_even_tick_offers():
    with pytest.raises(ScenarioError, match="even tick"):
        run_can_only([_stream(4, t2=amsg(1, b""))])


def test_can_only_rejects_duplicate_simultaneous_ids():
    with pytest.raises(ScenarioError, match="duplicate identifiers"):
        run_can_only([_stream(4, t1=amsg(3, b"a")), _stream(4, t1=amsg(3, b"b"))])


def test_can_only_trace_has_no_application_streams():
    t = run_can_only([_stream(4)])
    assert "a" not in t.streams
    assert "buffers" not in t.states[0]


def test_can_only_trace_passes_all_checkers():
    from canstream import check_all

    t = run_can_only([
        _stream(8, t1=amsg(7, b"p"), t5=amsg(9, b"q")),
        _stream(8, t1=amsg(2, b"r")),
    ])
    report = check_all(t, latency=2,
                       predicates=("msg1", "format", "wire", "transmission", "row3", "structural"))
    assert report.ok(strict=True), report.violations[:3]
