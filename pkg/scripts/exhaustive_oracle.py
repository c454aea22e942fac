#!/usr/bin/env python3
"""Exhaustive small-scale equivalence sweep: simulator versus reference oracle.

Enumerates every two-node scenario with up to two messages per node, distinct
identifiers drawn from a small pool, and injection ticks from a small window,
then demands exact delivery-log equality.
"""
from __future__ import annotations

import argparse
import sys
import time
from itertools import permutations

from canstream import AMessage, Injection, Scenario
from canstream.oracle import compare_with_simulator


def enumerate_scenarios(ids, ticks, horizon):
    for k1 in range(3):
        for k2 in range(3):
            for id_sel in permutations(ids, k1 + k2):
                for t1 in permutations(ticks, k1):
                    for t2 in permutations(ticks, k2):
                        inj = tuple(
                            Injection(1, t1[j], AMessage(id_sel[j], bytes([0x10 + id_sel[j]])))
                            for j in range(k1)
                        ) + tuple(
                            Injection(2, t2[j], AMessage(id_sel[k1 + j], bytes([0x10 + id_sel[k1 + j]])))
                            for j in range(k2)
                        )
                        yield Scenario(2, horizon, inj)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ids", type=int, nargs="+", default=[1, 2, 3, 4])
    parser.add_argument("--ticks", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--horizon", type=int, default=16)
    args = parser.parse_args()

    started = time.perf_counter()
    count = divergent = 0
    for scenario in enumerate_scenarios(tuple(args.ids), tuple(args.ticks), args.horizon):
        count += 1
        result = compare_with_simulator(scenario)
        if not result.equivalent:
            divergent += 1
            if divergent <= 5:
                print(f"DIVERGENT: {scenario.injections}")
                print(f"  simulator: {[(t, m.id) for t, m in result.simulator_log]}")
                print(f"  oracle:    {[(t, m.id) for t, m in result.oracle_log]}")
    elapsed = time.perf_counter() - started
    print(f"{count} scenarios, {divergent} divergent, {elapsed:.2f}s")
    return 0 if divergent == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
