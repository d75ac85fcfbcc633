"""Regenerate the golden fixtures under tests/golden/.

Run only when output formats change on purpose, and eyeball the diff: the
point of a golden file is to make drift loud.
"""

from pathlib import Path

from mtlviz import (
    SourceProgram,
    analyze,
    new_session,
    render_ram_text,
    render_trace_json,
    snapshot_at,
    three_block_view,
)

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    source = SourceProgram.from_text(
        (GOLDEN / "sum_two_numbers.mtl").read_text(encoding="utf-8")
    )
    program, diagnostics = analyze(source)
    assert program is not None, diagnostics
    session = new_session(program, initial_inputs=("409", "91"))
    trace = session.run_to_end()
    assert trace.status.value == "finished", trace.status

    (GOLDEN / "sum_two_numbers_trace.json").write_text(
        render_trace_json(trace), encoding="utf-8"
    )
    (GOLDEN / "sum_two_numbers_final_ram.txt").write_text(
        render_ram_text(three_block_view(snapshot_at(trace, 12))), encoding="utf-8"
    )
    (GOLDEN / "sum_two_numbers_step4_ram.txt").write_text(
        render_ram_text(three_block_view(snapshot_at(trace, 4))), encoding="utf-8"
    )
    print(f"wrote goldens to {GOLDEN}")


if __name__ == "__main__":
    main()
