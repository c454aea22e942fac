"""Scenario and trace file formats.

Scenarios are single JSON documents; traces are line-delimited JSON with one
header line followed by one line per tick. All dumps are canonical (sorted
keys, fixed separators, integers and hex strings only), so a given run always
serializes to identical bytes.
"""
from __future__ import annotations

import json
from typing import Any

from .checkers import Report
from .components import BufferState, DecoderState, EncoderState, LogicalLayerState, WireState
from .core import (
    AMessage,
    DataSym,
    IdSym,
    Injection,
    RunOptions,
    Scenario,
    TimedStream,
    Trace,
)

TRACE_FORMAT = "canstream-trace"
TRACE_VERSION = 1


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _amessage_to_obj(m: AMessage) -> dict:
    return {"id": m.id, "data": m.data.hex()}


def _amessage_from_obj(obj: dict) -> AMessage:
    return AMessage(int(obj["id"]), bytes.fromhex(obj["data"]))


def _symbol_to_obj(m) -> dict:
    if isinstance(m, IdSym):
        return {"sym": "id", "value": m.value}
    return {"sym": "data", "value": m.value.hex()}


def _symbol_from_obj(obj: dict):
    if obj["sym"] == "id":
        return IdSym(int(obj["value"]))
    return DataSym(bytes.fromhex(obj["value"]))


_CELL_CODECS = {
    "amessage": (_amessage_to_obj, _amessage_from_obj),
    "symbol": (_symbol_to_obj, _symbol_from_obj),
    "req": (lambda r: r, lambda r: int(r)),
}

_FAMILY_KIND = {
    "a": "amessage", "as": "amessage", "ar": "amessage",
    "ms": "symbol", "mr": "symbol", "ws": "symbol", "wr": "symbol",
    "r": "req",
}


def _cell_to_obj(cell, kind: str) -> list:
    enc, _ = _CELL_CODECS[kind]
    return [enc(m) for m in cell]


def _cell_from_obj(obj: list, kind: str) -> tuple:
    _, dec = _CELL_CODECS[kind]
    return tuple(dec(m) for m in obj)


# -- scenarios ---------------------------------------------------------------

def scenario_to_dict(s: Scenario) -> dict:
    return {
        "nodeCount": s.node_count,
        "horizon": s.horizon,
        "injections": [
            {"node": inj.node, "tick": inj.tick, "id": inj.message.id, "data": inj.message.data.hex()}
            for inj in s.injections
        ],
        "options": {
            "bootstrapRequestTick": s.options.bootstrap_request_tick,
            "reqDelay": s.options.req_delay,
            "mtLatency": s.options.mt_latency,
            "fidelityMode": s.options.fidelity_row2,
        },
    }


def scenario_from_dict(obj: dict) -> Scenario:
    opts = obj.get("options", {})
    boot = opts.get("bootstrapRequestTick", 0)
    return Scenario(
        node_count=int(obj["nodeCount"]),
        horizon=int(obj["horizon"]),
        injections=tuple(
            Injection(int(i["node"]), int(i["tick"]), AMessage(int(i["id"]), bytes.fromhex(i["data"])))
            for i in obj.get("injections", ())
        ),
        options=RunOptions(
            bootstrap_request_tick=None if boot is None else int(boot),
            req_delay=int(opts.get("reqDelay", 1)),
            mt_latency=int(opts.get("mtLatency", 2)),
            fidelity_row2=bool(opts.get("fidelityMode", False)),
        ),
    )


def scenario_to_json(s: Scenario) -> str:
    return _dumps(scenario_to_dict(s)) + "\n"


def scenario_from_json(text: str) -> Scenario:
    return scenario_from_dict(json.loads(text))


# -- component state snapshots ------------------------------------------------

def _snapshot_to_obj(snap: dict) -> dict:
    out: dict = {
        "encoders": [
            {"e": e.e, "pending": None if e.pending is None else e.pending.hex()}
            for e in snap["encoders"]
        ],
        "decoders": [{"d": d.d, "lastId": d.last_id} for d in snap["decoders"]],
        "llayers": [{"lid": ll.lid} for ll in snap["llayers"]],
        "wire": {
            "latch": _cell_to_obj(snap["wire"].latch, "symbol"),
            "sources": list(snap["wire"].latch_sources),
        },
    }
    if "buffers" in snap:
        out["buffers"] = [
            {"buf": _cell_to_obj(b.buf, "amessage"), "b": _cell_to_obj(b.b, "amessage")}
            for b in snap["buffers"]
        ]
    return out


def _snapshot_from_obj(obj: dict) -> dict:
    snap: dict = {
        "encoders": tuple(
            EncoderState(e=e["e"], pending=None if e["pending"] is None else bytes.fromhex(e["pending"]))
            for e in obj["encoders"]
        ),
        "decoders": tuple(DecoderState(d=d["d"], last_id=d["lastId"]) for d in obj["decoders"]),
        "llayers": tuple(LogicalLayerState(lid=ll["lid"]) for ll in obj["llayers"]),
        "wire": WireState(
            latch=_cell_from_obj(obj["wire"]["latch"], "symbol"),
            latch_sources=tuple(obj["wire"]["sources"]),
        ),
    }
    if "buffers" in obj:
        snap["buffers"] = tuple(
            BufferState(buf=_cell_from_obj(b["buf"], "amessage"), b=_cell_from_obj(b["b"], "amessage"))
            for b in obj["buffers"]
        )
    return snap


# -- traces -------------------------------------------------------------------

def trace_to_jsonl(trace: Trace) -> str:
    header = {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "nodeCount": trace.node_count,
        "horizon": trace.horizon,
        "scenario": None if trace.scenario is None else scenario_to_dict(trace.scenario),
    }
    lines = [_dumps(header)]
    for t in range(trace.horizon):
        tick: dict = {"t": t}
        for family, per_node in sorted(trace.streams.items()):
            kind = _FAMILY_KIND[family]
            tick[family] = [_cell_to_obj(s.cells[t], kind) for s in per_node]
        tick["wr"] = _cell_to_obj(trace.wire.cells[t], "symbol")
        tick["rows"] = list(trace.rows[t])
        tick["state"] = _snapshot_to_obj(trace.states[t])
        lines.append(_dumps(tick))
    if trace.error is not None:
        lines.append(_dumps({"error": trace.error}))
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text: str) -> Trace:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty trace file")
    header = json.loads(lines[0])
    if header.get("format") != TRACE_FORMAT:
        raise ValueError(f"not a {TRACE_FORMAT} file")
    n = int(header["nodeCount"])
    horizon = int(header["horizon"])
    scenario = None if header["scenario"] is None else scenario_from_dict(header["scenario"])

    error = None
    tick_lines = lines[1:]
    if tick_lines and "error" in json.loads(tick_lines[-1]):
        error = json.loads(tick_lines[-1])["error"]
        tick_lines = tick_lines[:-1]
    if len(tick_lines) != horizon:
        raise ValueError(f"expected {horizon} tick lines, found {len(tick_lines)}")

    ticks = [json.loads(line) for line in tick_lines]
    families = [f for f in _FAMILY_KIND if f != "wr" and (not ticks or f in ticks[0])]
    if not ticks:
        families = ["as", "ar", "r", "ms", "mr", "ws"] + (["a"] if scenario is not None else [])
    streams = {
        family: tuple(
            TimedStream(tuple(_cell_from_obj(tick[family][i], _FAMILY_KIND[family]) for tick in ticks))
            for i in range(n)
        )
        for family in families
    }
    return Trace(
        scenario=scenario,
        node_count=n,
        horizon=horizon,
        streams=streams,
        wire=TimedStream(tuple(_cell_from_obj(tick["wr"], "symbol") for tick in ticks)),
        rows=tuple(tuple(tick["rows"]) for tick in ticks),
        states=tuple(_snapshot_from_obj(tick["state"]) for tick in ticks),
        error=error,
    )


# -- reports ------------------------------------------------------------------

def report_to_dict(report: Report) -> dict:
    def finding(v) -> dict:
        return {
            "predicate": v.predicate,
            "tick": v.tick,
            "streams": list(v.streams),
            "expected": v.expected,
            "observed": v.observed,
            "severity": v.severity,
        }

    return {
        "ok": report.ok(),
        "predicates": [
            {
                "predicate": e.predicate,
                "violations": [finding(v) for v in e.violations],
                "warnings": [finding(w) for w in e.warnings],
            }
            for e in report.entries
        ],
    }


def report_to_json(report: Report) -> str:
    return _dumps(report_to_dict(report)) + "\n"
