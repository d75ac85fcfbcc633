"""Text and JSON renderers for RAM snapshots, steps, and traces.

The JSON form is canonical: fixed key order, compact separators, and no
ASCII escaping, so serializing a trace always yields the same bytes and a
loads/dumps round trip is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .lang.nodes import SourceProgram
from .machine import (
    Fault,
    Holds,
    InputConsumed,
    InputRequested,
    IntegerValue,
    IoEvent,
    OutputEmitted,
    RESERVED,
    RamCell,
    RamSnapshot,
    Reserved,
    TextValue,
    Trace,
    TraceStep,
    render_value,
)

RAM_HEADER_BEFORE = "RAM: BEFORE EXECUTION"
RAM_HEADER_DECLARATION = "RAM: AFTER DECLARATION"
RAM_HEADER_ASSIGNMENT = "RAM: AFTER ASSIGNMENT"

HIGHLIGHT_ON = "\x1b[7m"
HIGHLIGHT_OFF = "\x1b[0m"


@dataclass(frozen=True)
class ThreeBlockView:
    """The classic three-phase RAM picture derived from one snapshot."""

    before: RamSnapshot
    after_declaration: RamSnapshot
    after_assignment: RamSnapshot


def three_block_view(snapshot: RamSnapshot) -> ThreeBlockView:
    return ThreeBlockView(
        before=(),
        after_declaration=tuple(RamCell(cell.name, RESERVED) for cell in snapshot),
        after_assignment=snapshot,
    )


def _state_text(state: Reserved | Holds) -> str:
    return "RESERVED" if isinstance(state, Reserved) else render_value(state.value)


def _render_box(title: str, snapshot: RamSnapshot) -> list[str]:
    lines = [title]
    if not snapshot:
        lines.append("| (empty) |")
        return lines
    name_width = max(len(cell.name) for cell in snapshot)
    state_width = max(len(_state_text(cell.state)) for cell in snapshot)
    for cell in snapshot:
        lines.append(
            f"| {cell.name:<{name_width}} | {_state_text(cell.state):<{state_width}} |"
        )
    return lines


def render_ram_text(view: ThreeBlockView) -> str:
    blocks = [
        _render_box(RAM_HEADER_BEFORE, view.before),
        _render_box(RAM_HEADER_DECLARATION, view.after_declaration),
        _render_box(RAM_HEADER_ASSIGNMENT, view.after_assignment),
    ]
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"


def render_step_text(
    step: TraceStep, source: SourceProgram, color: bool = False
) -> str:
    """Program listing with the executed line marked, then the annotations."""
    lines = []
    for number, raw in source.lines:
        body = f"{number}. {raw}"
        if number == step.line:
            if color:
                body = f"{HIGHLIGHT_ON}{body}{HIGHLIGHT_OFF}"
            lines.append(f"=> {body}")
        else:
            lines.append(f"   {body}")
    lines.append("")
    lines.extend(step.annotations)
    return "\n".join(lines) + "\n"


# --- canonical trace JSON ----------------------------------------------------


def io_event_to_obj(event: IoEvent) -> dict[str, Any]:
    if isinstance(event, InputRequested):
        return {"type": "input_requested", "prompt": event.prompt}
    if isinstance(event, InputConsumed):
        return {"type": "input_consumed", "prompt": event.prompt, "raw": event.raw}
    if isinstance(event, OutputEmitted):
        return {"type": "output", "text": event.text}
    raise TypeError(f"not an io event: {event!r}")


def ram_cell_to_obj(cell: RamCell) -> dict[str, Any]:
    if isinstance(cell.state, Reserved):
        return {"cell": cell.name, "state": "reserved"}
    value = cell.state.value
    if isinstance(value, IntegerValue):
        return {
            "cell": cell.name,
            "state": "value",
            "type": "Integer",
            "value": value.value,
        }
    assert isinstance(value, TextValue)
    return {
        "cell": cell.name,
        "state": "value",
        "type": "String",
        "value": value.text,
    }


def step_to_obj(step: TraceStep) -> dict[str, Any]:
    return {
        "index": step.index,
        "line": step.line,
        "statement": step.statement_text,
        "annotations": list(step.annotations),
        "io": [io_event_to_obj(event) for event in step.io],
        "ram": [ram_cell_to_obj(cell) for cell in step.ram_after],
    }


def fault_to_obj(fault: Fault) -> dict[str, Any]:
    return {
        "line": fault.line,
        "kind": fault.kind.value,
        "message": fault.message,
        "suggestion": fault.suggestion,
    }


def trace_to_obj(trace: Trace) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "version": 1,
        "status": trace.status.value,
        "outputs": list(trace.outputs),
        "steps": [step_to_obj(step) for step in trace.steps],
    }
    if trace.fault is not None:
        obj["fault"] = fault_to_obj(trace.fault)
    return obj


def render_trace_json(trace: Trace) -> str:
    return dumps_canonical(trace_to_obj(trace))


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
