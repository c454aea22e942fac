"""Message universe, stream container, and scenario/trace records.

Everything here is an immutable value: components and checkers never share
mutable state, so traces and states can be passed around freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence, Union

# Default cap on payload size, mirroring the classic 8-octet CAN data field.
# This is configuration, not semantics: nothing in the model inspects payload
# contents beyond equality.
PAYLOAD_CAP_DEFAULT = 8

# The request token. Request cells carry this single constant value.
REQ = 0


class ModelViolation(Exception):
    """A protocol-level contract was broken during a run."""


class AssumptionViolation(ModelViolation):
    """A component received inputs outside its stated assumptions."""


class MixingViolation(AssumptionViolation):
    """Identifier and data symbols were offered to the bus in the same tick."""


class FormatViolation(ModelViolation):
    """A message stream broke the identifier-then-data frame format."""


class InputCollision(ModelViolation):
    """The encoder was handed a new message while still emitting the last one."""


class ScenarioError(ValueError):
    """A scenario failed validation and cannot be run."""


@dataclass(frozen=True, slots=True)
class AMessage:
    """Application-level message: identifier plus opaque payload.

    A lower identifier value means a higher priority on the bus.
    """

    id: int
    data: bytes


def make_amessage(id: int, data: bytes, *, max_payload: int = PAYLOAD_CAP_DEFAULT) -> AMessage:
    """Construct an AMessage, enforcing the configured payload cap."""
    if id < 0:
        raise ValueError(f"identifier must be a natural number, got {id}")
    if len(data) > max_payload:
        raise ValueError(f"payload of {len(data)} octets exceeds cap of {max_payload}")
    return AMessage(id, bytes(data))


@dataclass(frozen=True, slots=True)
class IdSym:
    """Arbitration-phase wire symbol carrying a frame identifier."""

    value: int


@dataclass(frozen=True, slots=True)
class DataSym:
    """Data-phase wire symbol carrying an opaque payload."""

    value: bytes


Message = Union[IdSym, DataSym]

# A cell is what a stream carries in one tick: a finite (usually 0- or
# 1-element) sequence of messages. Cells are plain tuples.
Cell = tuple


@dataclass(frozen=True, slots=True)
class TimedStream:
    """Map from tick to the finite list of messages observed in that interval."""

    cells: tuple[Cell, ...]

    @staticmethod
    def of(cells: Iterable[Sequence[Any]]) -> "TimedStream":
        return TimedStream(tuple(tuple(c) for c in cells))

    @property
    def horizon(self) -> int:
        return len(self.cells)


@dataclass(frozen=True, slots=True)
class Injection:
    """One application message handed to one node at one tick."""

    node: int
    tick: int
    message: AMessage


@dataclass(frozen=True, slots=True)
class RunOptions:
    """Executor knobs.

    bootstrap_request_tick primes each node's buffer with one initial request
    (None disables priming entirely, which demonstrably stalls the system).
    req_delay is the delay, in ticks, between a controller raising its
    transmit-success request and that request appearing on the observable
    request stream. fidelity_row2 switches the bus-access table to its literal
    non-transmitting identifier row, another deliberately stalling variant.
    """

    bootstrap_request_tick: int | None = 0
    req_delay: int = 1
    mt_latency: int = 2
    fidelity_row2: bool = False


@dataclass(frozen=True, slots=True)
class Scenario:
    """A complete, deterministic run description."""

    node_count: int
    horizon: int
    injections: tuple[Injection, ...] = ()
    options: RunOptions = field(default_factory=RunOptions)


@dataclass(frozen=True, slots=True)
class ScenarioViolation:
    rule: str
    node: int | None
    tick: int | None
    detail: str


def validate_scenario(s: Scenario) -> list[ScenarioViolation]:
    """Return all rule violations in a scenario; empty means runnable."""
    out: list[ScenarioViolation] = []
    if s.node_count < 1:
        out.append(ScenarioViolation("node-count", None, None, f"nodeCount must be >= 1, got {s.node_count}"))
    if s.horizon < 0:
        out.append(ScenarioViolation("horizon", None, None, f"horizon must be >= 0, got {s.horizon}"))
    if s.options.req_delay < 0:
        out.append(ScenarioViolation("req-delay", None, None, f"reqDelay must be >= 0, got {s.options.req_delay}"))
    if s.options.mt_latency < 0:
        out.append(ScenarioViolation("mt-latency", None, None, f"mtLatency must be >= 0, got {s.options.mt_latency}"))
    boot = s.options.bootstrap_request_tick
    if boot is not None and boot < 0:
        out.append(ScenarioViolation("bootstrap", None, None, f"bootstrapRequestTick must be >= 0, got {boot}"))
    seen: set[tuple[int, int]] = set()
    for inj in s.injections:
        if not 1 <= inj.node <= s.node_count:
            out.append(ScenarioViolation("node-range", inj.node, inj.tick,
                                         f"node {inj.node} outside [1..{s.node_count}]"))
        if not 0 <= inj.tick < s.horizon:
            out.append(ScenarioViolation("out-of-horizon", inj.node, inj.tick,
                                         f"injection tick {inj.tick} outside [0..{s.horizon - 1}]"))
        if inj.message.id < 0:
            out.append(ScenarioViolation("identifier", inj.node, inj.tick,
                                         f"identifier {inj.message.id} is negative"))
        key = (inj.node, inj.tick)
        if key in seen:
            out.append(ScenarioViolation("duplicate-injection", inj.node, inj.tick,
                                         f"two injections at node {inj.node}, tick {inj.tick}"))
        seen.add(key)
    return out


# Stream families recorded per node in a trace. "a" (raw injections) is only
# present when the run includes buffers; the rest always are.
PER_NODE_FAMILIES = ("a", "as", "ar", "r", "ms", "mr", "ws")


@dataclass(frozen=True, slots=True)
class Trace:
    """The full record of one run: every named stream plus per-tick states.

    streams maps a family name ("a", "as", "ar", "r", "ms", "mr", "ws") to one
    TimedStream per node (index 0 is node 1). wire is the shared bus stream.
    rows[t][i] is the bus-access table row that fired for node i+1 at tick t.
    states[t] is the snapshot of every component state entering tick t.
    """

    scenario: Scenario | None
    node_count: int
    horizon: int
    streams: dict[str, tuple[TimedStream, ...]]
    wire: TimedStream
    rows: tuple[tuple[int, ...], ...]
    states: tuple[dict, ...]
    error: dict | None = None

    def node_stream(self, family: str, node: int) -> TimedStream:
        if family == "wr":
            return self.wire
        if family not in self.streams:
            raise ValueError(f"unknown stream family {family!r}")
        if not 1 <= node <= self.node_count:
            raise ValueError(f"node {node} outside [1..{self.node_count}]")
        return self.streams[family][node - 1]

    def cell(self, family: str, node: int, t: int) -> Cell:
        return self.node_stream(family, node).cells[t]
