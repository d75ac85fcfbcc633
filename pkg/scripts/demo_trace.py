"""Walk a program step by step from Python, printing each line's RAM effect.

Usage:
    python3 scripts/demo_trace.py [FILE] [INPUT ...]

Defaults to the bundled sum example with inputs 409 and 91. This is the
library-level counterpart of `mtlviz run`: it drives a Session by hand, so
it doubles as a minimal embedding example.
"""

from __future__ import annotations

import sys
from pathlib import Path

from mtlviz import (
    AwaitingInput,
    SourceProgram,
    TraceStep,
    analyze,
    new_session,
)
from mtlviz.render import render_ram_text, render_step_text, three_block_view

REPO = Path(__file__).resolve().parent.parent


def main(argv: list[str]) -> int:
    if argv:
        path = Path(argv[0])
        inputs = list(argv[1:])
    else:
        path = REPO / "programs" / "sum_two_numbers.mtl"
        inputs = ["409", "91"]

    source = SourceProgram.from_text(path.read_text(encoding="utf-8"))
    program, diagnostics = analyze(source)
    if program is None:
        for diagnostic in diagnostics:
            print(diagnostic, file=sys.stderr)
        return 1

    session = new_session(program, initial_inputs=tuple(inputs))
    while True:
        outcome = session.step()
        if isinstance(outcome, AwaitingInput):
            print(f"(ran out of input at prompt {outcome.prompt!r})")
            return 4
        if not isinstance(outcome, TraceStep):
            break
        print(render_step_text(outcome, source))
        print(render_ram_text(three_block_view(outcome.ram_after)))

    trace = session.trace()
    print(f"status: {trace.status.value} after {len(trace.steps)} steps")
    for text in trace.outputs:
        print(f"output: {text}")
    if trace.fault is not None:
        fault = trace.fault
        print(f"fault: {fault.kind.value} on line {fault.line}: {fault.message}")
        print(f"hint: {fault.suggestion}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
