#!/usr/bin/env python3
"""Demonstrate the two stalling configurations against the normal run.

Same single-message scenario three ways: normal, literal row 2 (identifiers
never reach the bus), and unprimed buffers (no initial request). The row
dispatch per tick and the delivery counts make the stalls visible.
"""
from __future__ import annotations

from canstream import AMessage, Injection, RunOptions, Scenario, run_scenario
from canstream.checkers import check_row3_unreachable
from canstream.system import delivery_log

BASE = Scenario(1, 10, (Injection(1, 0, AMessage(5, bytes.fromhex("ab"))),))

MODES = {
    "normal": RunOptions(),
    "literal row 2": RunOptions(fidelity_row2=True),
    "no priming": RunOptions(bootstrap_request_tick=None),
}


def main() -> None:
    for name, options in MODES.items():
        scenario = Scenario(BASE.node_count, BASE.horizon, BASE.injections, options)
        trace = run_scenario(scenario)
        deliveries = delivery_log(trace)
        row3 = check_row3_unreachable(trace)
        rows = " ".join(str(r[0]) for r in trace.rows)
        print(f"{name:14s} deliveries={len(deliveries)}  row3 firings={len(row3):2d}  rows: {rows}")
        if deliveries:
            for t, m in deliveries:
                print(f"{'':14s} tick {t}: id={m.id} data={m.data.hex()}")


if __name__ == "__main__":
    main()
