"""The five protocol components as deterministic Mealy-style state machines.

Every step function is pure: it maps (state, inputs at tick t) to (outputs at
tick t, next state). Outputs never depend on anything later than t, and the
next state is what the component carries into tick t+1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    REQ,
    AMessage,
    AssumptionViolation,
    Cell,
    DataSym,
    FormatViolation,
    IdSym,
    InputCollision,
    Message,
    MixingViolation,
)
from .primitives import broadcast, collect_elements, pr_add


@dataclass(frozen=True, slots=True)
class BufferState:
    """buf is the id-sorted waiting queue; b is the one-slot transmit offer."""

    buf: tuple[AMessage, ...] = ()
    b: tuple[AMessage, ...] = ()


@dataclass(frozen=True, slots=True)
class EncoderState:
    """e marks an encoding in progress; pending caches the payload to emit next."""

    e: bool = False
    pending: bytes | None = None


@dataclass(frozen=True, slots=True)
class DecoderState:
    """d marks a decoding in progress; last_id caches the frame's identifier."""

    d: bool = False
    last_id: int | None = None


@dataclass(frozen=True, slots=True)
class LogicalLayerState:
    """lid is the identifier of the frame this node last put up for arbitration."""

    lid: int = 0


@dataclass(frozen=True, slots=True)
class WireState:
    """latch holds the previous tick's collected bus offers (unit delay).

    latch_sources records which nodes contributed, in latch order, purely for
    diagnostics when a mixing violation surfaces one tick later.
    """

    latch: tuple[Message, ...] = ()
    latch_sources: tuple[int, ...] = ()


def _check_unary(cell: Sequence, name: str, t: int) -> None:
    if len(cell) > 1:
        raise AssumptionViolation(f"{name} carries {len(cell)} messages at tick {t}")


def buffer_emission(state: BufferState, t: int) -> Cell:
    """Buffer output at tick t: silent on even ticks, the offer slot on odd."""
    return () if t % 2 == 0 else state.b


def buffer_step(state: BufferState, a: Sequence[AMessage], r: Sequence[int], t: int) -> tuple[Cell, BufferState]:
    """One buffer tick.

    The output only depends on parity and the offer slot. The update is
    request-driven: without a request the arrival (if any) is queued by
    priority and the slot keeps its value; with a request the slot is
    reloaded, either directly from the arrival when the queue is empty or
    from the head of the updated queue.
    """
    _check_unary(a, "buffer input a", t)
    out = buffer_emission(state, t)
    newbuf = state.buf if not a else pr_add(state.buf, a[0])
    if not r:
        nxt = BufferState(buf=newbuf, b=state.b)
    elif not state.buf:
        nxt = BufferState(buf=(), b=tuple(a))
    else:
        nxt = BufferState(buf=newbuf[1:], b=(newbuf[0],))
    return out, nxt


def encoder_step(state: EncoderState, as_cell: Sequence[AMessage], t: int) -> tuple[Cell, EncoderState]:
    """One encoder tick: identifier first, cached payload one tick later.

    A fresh message while the previous payload is still pending has no
    consistent encoding, so it is rejected rather than silently dropped; the
    buffer's odd-tick cadence keeps composed runs clear of this.
    """
    _check_unary(as_cell, "encoder input", t)
    if state.e:
        if as_cell:
            raise InputCollision(f"encoder got a new message at tick {t} while mid-frame")
        return (DataSym(state.pending),), EncoderState(e=False, pending=None)
    if not as_cell:
        return (), state
    msg = as_cell[0]
    return (IdSym(msg.id),), EncoderState(e=True, pending=msg.data)


def decoder_step(state: DecoderState, mr: Sequence[Message], t: int) -> tuple[Cell, DecoderState]:
    """One decoder tick: remember the identifier, deliver on the data symbol."""
    _check_unary(mr, "decoder input", t)
    if not mr:
        return (), DecoderState(d=False, last_id=None)
    sym = mr[0]
    if isinstance(sym, IdSym):
        if state.d:
            raise FormatViolation(f"identifier symbol at tick {t} while already decoding")
        return (), DecoderState(d=True, last_id=sym.value)
    if not state.d:
        raise FormatViolation(f"data symbol at tick {t} with no preceding identifier")
    return (AMessage(state.last_id, sym.value),), DecoderState(d=False, last_id=None)


def dispatch_row(ms: Sequence[Message], wr: Sequence[Message], lid: int) -> int:
    """Which row of the bus-access table fires for (ms, wr, lid)."""
    if not ms:
        return 1
    if isinstance(ms[0], IdSym):
        return 2
    if not wr:
        return 3
    if wr[0] == IdSym(lid):
        return 4
    return 5


def logical_layer_step(
    state: LogicalLayerState,
    ms: Sequence[Message],
    wr: Sequence[Message],
    t: int,
    *,
    literal_row2: bool = False,
) -> tuple[Cell, Cell, Cell, LogicalLayerState]:
    """One bus-access tick; returns (mr, ws, r, next state).

    mr always mirrors wr. Identifier symbols are put up for arbitration (row 2)
    and remembered in lid; a data symbol is driven onto the bus with a success
    request exactly when the bus's arbitration verdict matches lid (row 4),
    and swallowed when it does not (rows 3 and 5).

    literal_row2 reproduces the non-transmitting variant of row 2 (ws empty),
    under which no identifier ever reaches the bus and arbitration starves.
    """
    _check_unary(ms, "bus-access input ms", t)
    _check_unary(wr, "bus-access input wr", t)
    mr = tuple(wr)
    row = dispatch_row(ms, wr, state.lid)
    if row == 2:
        ws: Cell = () if literal_row2 else (ms[0],)
        return mr, ws, (), LogicalLayerState(lid=ms[0].value)
    if row == 4:
        return mr, (ms[0],), (REQ,), state
    return mr, (), (), state


def wire_emission(state: WireState, t: int) -> Cell:
    """Bus output at tick t: empty at t=0, else the latched offers resolved."""
    if t == 0:
        return ()
    try:
        return broadcast(state.latch)
    except MixingViolation as exc:
        raise MixingViolation(
            f"bus offers from tick {t - 1} mix identifier and data symbols "
            f"(nodes {list(state.latch_sources)})"
        ) from exc


def wire_latch(ws_all: Sequence[Sequence[Message]], t: int) -> WireState:
    """Collect this tick's per-node bus offers for emission next tick."""
    n = len(ws_all)
    for i, cell in enumerate(ws_all, start=1):
        if len(cell) > 1:
            raise AssumptionViolation(f"ws_{i} carries {len(cell)} messages at tick {t}")
    latch = collect_elements(n, ws_all)
    sources = tuple(i for i in range(n, 0, -1) if ws_all[i - 1])
    return WireState(latch=latch, latch_sources=sources)


def wire_step(state: WireState, ws_all: Sequence[Sequence[Message]], t: int) -> tuple[Cell, WireState]:
    """One bus tick: emit last tick's resolution, latch this tick's offers."""
    wr = wire_emission(state, t)
    return wr, wire_latch(ws_all, t)
