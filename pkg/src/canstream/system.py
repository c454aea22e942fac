"""Composition of buffers, controllers, and the bus into one synchronous system.

Within a tick the evaluation order is fixed: buffers emit, encoders run, the
bus emits from its latch, each node's bus-access layer runs, decoders run, and
finally all states update. The only feedback cycles (bus-access -> wire ->
bus-access, and the request path back into the buffers) are broken by the
wire's unit delay and by the buffers consuming requests in the update phase,
so the order is causally well defined.

Request flow: a controller raises its transmit-success request during the data
phase of a won frame; the owning buffer consumes it in that same tick's state
update, which releases the offer slot before the next odd tick (otherwise the
frame would be re-offered and delivered twice). A request that finds nothing
to hand over stays pending until a message arrives, so nodes wake up when new
traffic appears. One bootstrap request primes each node; without it nothing
ever flows. The externally recorded request stream r_i shows the success
requests req_delay ticks late, which places them exactly mt_latency ticks
after the frame start.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .components import (
    BufferState,
    DecoderState,
    EncoderState,
    LogicalLayerState,
    WireState,
    buffer_emission,
    buffer_step,
    decoder_step,
    dispatch_row,
    encoder_step,
    logical_layer_step,
    wire_emission,
    wire_latch,
)
from .core import (
    REQ,
    AMessage,
    Cell,
    ModelViolation,
    RunOptions,
    Scenario,
    ScenarioError,
    TimedStream,
    Trace,
    validate_scenario,
)


@dataclass(frozen=True, slots=True)
class SystemState:
    """All component states plus the executor's request bookkeeping.

    req_line is the per-node delay line feeding the observable request stream
    (length req_delay, oldest cell first). req_pending marks nodes whose last
    request is still waiting for a message to hand over.
    """

    buffers: tuple[BufferState, ...]
    encoders: tuple[EncoderState, ...]
    decoders: tuple[DecoderState, ...]
    llayers: tuple[LogicalLayerState, ...]
    wire: WireState
    req_line: tuple[tuple[Cell, ...], ...]
    req_pending: tuple[bool, ...]


@dataclass(frozen=True, slots=True)
class TickRecord:
    """Every stream cell produced at one tick, plus row dispatch and states."""

    t: int
    a: tuple[Cell, ...] | None
    as_: tuple[Cell, ...]
    ar: tuple[Cell, ...]
    r: tuple[Cell, ...]
    ms: tuple[Cell, ...]
    mr: tuple[Cell, ...]
    ws: tuple[Cell, ...]
    wr: Cell
    rows: tuple[int, ...]
    snapshot: dict


class RunError(ModelViolation):
    """A component contract failed mid-run; carries the partial trace."""

    def __init__(self, message: str, trace: Trace):
        super().__init__(message)
        self.trace = trace


def initial_state(node_count: int, req_delay: int) -> SystemState:
    line = ((),) * req_delay
    return SystemState(
        buffers=(BufferState(),) * node_count,
        encoders=(EncoderState(),) * node_count,
        decoders=(DecoderState(),) * node_count,
        llayers=(LogicalLayerState(),) * node_count,
        wire=WireState(),
        req_line=(line,) * node_count,
        req_pending=(False,) * node_count,
    )


def _controller_snapshot(state: SystemState, with_buffers: bool) -> dict:
    snap = {
        "encoders": state.encoders,
        "decoders": state.decoders,
        "llayers": state.llayers,
        "wire": state.wire,
    }
    if with_buffers:
        snap["buffers"] = state.buffers
    return snap


def tick_system(
    state: SystemState,
    a_cells: Sequence[Cell],
    t: int,
    options: RunOptions,
) -> tuple[TickRecord, SystemState]:
    """Advance the full system by one tick, recording every stream cell."""
    n = len(state.buffers)
    snapshot = _controller_snapshot(state, with_buffers=True)

    as_cells = tuple(buffer_emission(state.buffers[i], t) for i in range(n))

    enc_results = [encoder_step(state.encoders[i], as_cells[i], t) for i in range(n)]
    ms_cells = tuple(res[0] for res in enc_results)

    wr_cell = wire_emission(state.wire, t)

    rows = tuple(dispatch_row(ms_cells[i], wr_cell, state.llayers[i].lid) for i in range(n))
    ll_results = [
        logical_layer_step(state.llayers[i], ms_cells[i], wr_cell, t, literal_row2=options.fidelity_row2)
        for i in range(n)
    ]
    mr_cells = tuple(res[0] for res in ll_results)
    ws_cells = tuple(res[1] for res in ll_results)
    rll_cells = tuple(res[2] for res in ll_results)

    dec_results = [decoder_step(state.decoders[i], mr_cells[i], t) for i in range(n)]
    ar_cells = tuple(res[0] for res in dec_results)

    # Observable request stream: bootstrap priming plus the delayed success
    # requests (delay line head is the oldest entry).
    boot = options.bootstrap_request_tick is not None and t == options.bootstrap_request_tick
    boot_cell: Cell = (REQ,) if boot else ()
    if options.req_delay == 0:
        delayed = rll_cells
    else:
        delayed = tuple(state.req_line[i][0] for i in range(n))
    r_cells = tuple(boot_cell + delayed[i] for i in range(n))

    # Buffer updates: success requests act in the same tick they are raised,
    # and an unconsumed request stands until it can hand a message over.
    new_buffers = []
    new_pending = []
    for i in range(n):
        has_req = boot or state.req_pending[i] or bool(rll_cells[i])
        _, nb = buffer_step(state.buffers[i], a_cells[i], (REQ,) if has_req else (), t)
        new_buffers.append(nb)
        new_pending.append(has_req and not nb.b)

    if options.req_delay == 0:
        new_line = state.req_line
    else:
        new_line = tuple(state.req_line[i][1:] + (rll_cells[i],) for i in range(n))

    next_state = SystemState(
        buffers=tuple(new_buffers),
        encoders=tuple(res[1] for res in enc_results),
        decoders=tuple(res[1] for res in dec_results),
        llayers=tuple(res[3] for res in ll_results),
        wire=wire_latch(ws_cells, t),
        req_line=new_line,
        req_pending=tuple(new_pending),
    )
    record = TickRecord(
        t=t, a=tuple(a_cells), as_=as_cells, ar=ar_cells, r=r_cells,
        ms=ms_cells, mr=mr_cells, ws=ws_cells, wr=wr_cell, rows=rows, snapshot=snapshot,
    )
    return record, next_state


def _build_trace(
    scenario: Scenario | None,
    n: int,
    records: Sequence[TickRecord],
    error: dict | None = None,
) -> Trace:
    def family(getter) -> tuple[TimedStream, ...]:
        return tuple(TimedStream(tuple(getter(rec)[i] for rec in records)) for i in range(n))

    streams: dict[str, tuple[TimedStream, ...]] = {
        "as": family(lambda r: r.as_),
        "ar": family(lambda r: r.ar),
        "r": family(lambda r: r.r),
        "ms": family(lambda r: r.ms),
        "mr": family(lambda r: r.mr),
        "ws": family(lambda r: r.ws),
    }
    if records and records[0].a is not None:
        streams["a"] = family(lambda r: r.a)
    elif not records and scenario is not None:
        streams["a"] = tuple(TimedStream(()) for _ in range(n))
    return Trace(
        scenario=scenario,
        node_count=n,
        horizon=len(records),
        streams=streams,
        wire=TimedStream(tuple(rec.wr for rec in records)),
        rows=tuple(rec.rows for rec in records),
        states=tuple(rec.snapshot for rec in records),
        error=error,
    )


def run_scenario(scenario: Scenario) -> Trace:
    """Run a validated scenario to completion; identical inputs give identical traces."""
    problems = validate_scenario(scenario)
    if problems:
        raise ScenarioError("; ".join(v.detail for v in problems))
    n = scenario.node_count
    injections = {(inj.node, inj.tick): (inj.message,) for inj in scenario.injections}
    state = initial_state(n, scenario.options.req_delay)
    records: list[TickRecord] = []
    for t in range(scenario.horizon):
        a_cells = tuple(injections.get((node, t), ()) for node in range(1, n + 1))
        try:
            record, state = tick_system(state, a_cells, t, scenario.options)
        except ModelViolation as exc:
            partial = _build_trace(scenario, n, records, error={"tick": t, "message": str(exc)})
            raise RunError(f"tick {t}: {exc}", partial) from exc
        records.append(record)
    return _build_trace(scenario, n, records)


def run_can_only(
    as_streams: Sequence[TimedStream],
    options: RunOptions | None = None,
) -> Trace:
    """Drive controllers and bus directly from given offer streams (no buffers).

    The streams must follow the discipline buffers establish: at most one
    message per cell, offers only at odd ticks, and distinct identifiers among
    simultaneous offers. Anything else is rejected up front rather than run
    into undefined behaviour.
    """
    options = options or RunOptions()
    n = len(as_streams)
    if n < 1:
        raise ScenarioError("need at least one offer stream")
    horizon = as_streams[0].horizon
    problems: list[str] = []
    for i, s in enumerate(as_streams, start=1):
        if s.horizon != horizon:
            problems.append(f"as_{i} horizon {s.horizon} != {horizon}")
            continue
        for t, cell in enumerate(s.cells):
            if len(cell) > 1:
                problems.append(f"as_{i} carries {len(cell)} messages at tick {t}")
            if cell and t % 2 == 0:
                problems.append(f"as_{i} offers at even tick {t}")
    for t in range(horizon):
        ids = [s.cells[t][0].id for s in as_streams if t < s.horizon and s.cells[t]]
        if len(ids) != len(set(ids)):
            problems.append(f"duplicate identifiers offered at tick {t}: {sorted(ids)}")
    if problems:
        raise ScenarioError("; ".join(problems))

    encoders = (EncoderState(),) * n
    decoders = (DecoderState(),) * n
    llayers = (LogicalLayerState(),) * n
    wire = WireState()
    req_line = (((),) * options.req_delay,) * n
    records: list[TickRecord] = []
    for t in range(horizon):
        snapshot = {
            "encoders": encoders, "decoders": decoders, "llayers": llayers, "wire": wire,
        }
        as_cells = tuple(s.cells[t] for s in as_streams)
        enc_results = [encoder_step(encoders[i], as_cells[i], t) for i in range(n)]
        ms_cells = tuple(res[0] for res in enc_results)
        wr_cell = wire_emission(wire, t)
        rows = tuple(dispatch_row(ms_cells[i], wr_cell, llayers[i].lid) for i in range(n))
        ll_results = [
            logical_layer_step(llayers[i], ms_cells[i], wr_cell, t, literal_row2=options.fidelity_row2)
            for i in range(n)
        ]
        mr_cells = tuple(res[0] for res in ll_results)
        ws_cells = tuple(res[1] for res in ll_results)
        rll_cells = tuple(res[2] for res in ll_results)
        dec_results = [decoder_step(decoders[i], mr_cells[i], t) for i in range(n)]
        ar_cells = tuple(res[0] for res in dec_results)
        if options.req_delay == 0:
            r_cells = rll_cells
        else:
            r_cells = tuple(req_line[i][0] for i in range(n))
            req_line = tuple(req_line[i][1:] + (rll_cells[i],) for i in range(n))
        records.append(TickRecord(
            t=t, a=None, as_=as_cells, ar=ar_cells, r=r_cells,
            ms=ms_cells, mr=mr_cells, ws=ws_cells, wr=wr_cell, rows=rows, snapshot=snapshot,
        ))
        encoders = tuple(res[1] for res in enc_results)
        llayers = tuple(res[3] for res in ll_results)
        decoders = tuple(res[1] for res in dec_results)
        wire = wire_latch(ws_cells, t)
    return _build_trace(None, n, records)


def delivery_log(trace: Trace, node: int = 1) -> list[tuple[int, AMessage]]:
    """The (tick, message) sequence delivered to one node's application."""
    stream = trace.node_stream("ar", node)
    return [(t, cell[0]) for t, cell in enumerate(stream.cells) if cell]
