from __future__ import annotations

import pytest

from canstream import AMessage, Injection, RunOptions, Scenario


def amsg(ident: int, data: bytes = b"\x00") -> AMessage:
    return AMessage(ident, data)


def scenario(node_count, horizon, *injections, **options) -> Scenario:
    return Scenario(
        node_count=node_count,
        horizon=horizon,
        injections=tuple(Injection(n, t, amsg(i, d)) for n, t, i, d in injections),
        options=RunOptions(**options),
    )


@pytest.fixture
def golden_scenario() -> Scenario:
    """Single node, msg(5, 0xab) injected at tick 0, defaults everywhere."""
    return scenario(1, 6, (1, 0, 5, b"\xab"))


@pytest.fixture
def two_node_scenario() -> Scenario:
    """Two nodes race ids 3 and 5 from tick 0."""
    return scenario(2, 8, (1, 0, 3, b"\xaa"), (2, 0, 5, b"\xbb"))
