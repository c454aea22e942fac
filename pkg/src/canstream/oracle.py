"""Brute-force reference model of correct bus behaviour, for equivalence tests.

The oracle knows nothing about encoders, wires, or per-tick symbols. It keeps,
per node, a committed message (the one being offered for transmission), a
priority backlog, and a readiness flag, and applies the delivery rules
directly: at every odd tick the smallest committed identifier wins and is
delivered two ticks later; the winner commits its next message in the
following tick; losers keep offering. A node with nothing committed is ready,
and commits an arriving message immediately.

It deliberately shares no machinery with the simulator (its own insertion and
minimum handling via the bisect module), so agreement between the two is
evidence rather than tautology. Stalling configurations (no priming, literal
row 2) are ignored here on purpose: the oracle states what a correct bus would
deliver, which is exactly what makes the stalls visible in a comparison.
"""
from __future__ import annotations

import itertools
from bisect import insort
from dataclasses import dataclass

from .core import AMessage, Scenario, ScenarioError, Trace, validate_scenario
from .system import delivery_log, run_scenario

FRAME_LATENCY = 2  # ticks from frame start to delivery


def _run(scenario: Scenario) -> tuple[list[tuple[int, AMessage]], list[int]]:
    problems = validate_scenario(scenario)
    if problems:
        raise ScenarioError("; ".join(v.detail for v in problems))
    n = scenario.node_count
    horizon = scenario.horizon
    boot = scenario.options.bootstrap_request_tick
    bootstrap = 0 if boot is None else boot

    arrivals: dict[tuple[int, int], AMessage] = {
        (inj.node - 1, inj.tick): inj.message for inj in scenario.injections
    }
    counter = itertools.count()
    committed: list[AMessage | None] = [None] * n
    backlog: list[list[tuple[int, int, AMessage]]] = [[] for _ in range(n)]
    ready = [False] * n
    handoff_due = [-1] * n  # tick at which a winner commits its next message
    log: list[tuple[int, AMessage]] = []
    flagged: list[int] = []

    for t in range(horizon):
        if t % 2 == 1:
            contenders = [i for i in range(n) if committed[i] is not None]
            if contenders:
                best = min(committed[i].id for i in contenders)
                winners = [i for i in contenders if committed[i].id == best]
                if len(winners) > 1:
                    flagged.append(t)
                w = winners[0]
                if t + FRAME_LATENCY < horizon:
                    log.append((t + FRAME_LATENCY, committed[w]))
                handoff_due[w] = t + 1

        for i in range(n):
            arrived = arrivals.get((i, t))
            has_request = ready[i] or handoff_due[i] == t or t == bootstrap
            if has_request:
                if not backlog[i]:
                    committed[i] = arrived
                else:
                    if arrived is not None:
                        insort(backlog[i], (arrived.id, next(counter), arrived))
                    _, _, head = backlog[i].pop(0)
                    committed[i] = head
                ready[i] = committed[i] is None
            elif arrived is not None:
                insort(backlog[i], (arrived.id, next(counter), arrived))
    return log, flagged


def oracle_run(scenario: Scenario) -> list[tuple[int, AMessage]]:
    """Expected delivery log [(tick, message), ...] for a scenario."""
    log, _ = _run(scenario)
    return log


@dataclass(frozen=True, slots=True)
class CompareResult:
    """Outcome of an oracle-versus-simulator comparison."""

    equivalent: bool
    simulator_log: tuple[tuple[int, AMessage], ...]
    oracle_log: tuple[tuple[int, AMessage], ...]
    first_divergence: int | None
    flagged_ticks: tuple[int, ...]
    trace: Trace


def compare_with_simulator(scenario: Scenario) -> CompareResult:
    """Run both models and compare their node-1 delivery sequences exactly."""
    trace = run_scenario(scenario)
    sim = tuple(delivery_log(trace, node=1))
    log, flagged = _run(scenario)
    expected = tuple(log)
    divergence = None
    if sim != expected:
        divergence = next(
            (k for k in range(min(len(sim), len(expected))) if sim[k] != expected[k]),
            min(len(sim), len(expected)),
        )
    return CompareResult(
        equivalent=sim == expected,
        simulator_log=sim,
        oracle_log=expected,
        first_divergence=divergence,
        flagged_ticks=tuple(flagged),
        trace=trace,
    )
