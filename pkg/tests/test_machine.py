import pytest

from conftest import compile_text
from mtlviz import (
    AwaitingInput,
    FaultKind,
    Faulted,
    Finished,
    Holds,
    InputConsumed,
    InputRequested,
    IntegerValue,
    OutputEmitted,
    RESERVED,
    RamCell,
    Status,
    TextValue,
    TraceStep,
    Truncated,
    new_session,
    snapshot_at,
)


def run_text(text, inputs=(), step_cap=10000):
    session = new_session(compile_text(text), initial_inputs=tuple(inputs),
                          step_cap=step_cap)
    return session.run_to_end()


def cell(name, value=None):
    if value is None:
        return RamCell(name, RESERVED)
    if isinstance(value, int):
        return RamCell(name, Holds(IntegerValue(value)))
    return RamCell(name, Holds(TextValue(value)))


class TestGoldenProgram:
    def test_line_sequence(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.status is Status.FINISHED
        assert [s.line for s in trace.steps] == [1, 2, 3, 4, 5, 6, 7, 4, 5, 6, 7, 4, 8]
        assert [s.index for s in trace.steps] == list(range(13))

    def test_ram_checkpoints(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        ram = [s.ram_after for s in trace.steps]
        assert ram[0] == (cell("sum"),)
        assert ram[1] == (cell("sum", 0),)
        assert ram[2] == (cell("sum", 0), cell("num(0)"), cell("num(1)"))
        assert ram[3] == (cell("sum", 0), cell("num(0)"), cell("num(1)"),
                          cell("i", 0))
        assert ram[4] == (cell("sum", 0), cell("num(0)", 409), cell("num(1)"),
                          cell("i", 0))
        assert ram[5][0] == cell("sum", 409)
        assert ram[6][3] == cell("i", 1)
        assert ram[7] == ram[6]  # the re-check changes nothing
        assert ram[8][2] == cell("num(1)", 91)
        assert ram[9][0] == cell("sum", 500)
        assert ram[10][3] == cell("i", 2)
        assert ram[11] == ram[10]
        assert ram[12] == (cell("sum", 500), cell("num(0)", 409),
                           cell("num(1)", 91), cell("i", 2))

    def test_io_events(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.steps[4].io == (
            InputRequested("Input number0"),
            InputConsumed("Input number0", "409"),
        )
        assert trace.steps[8].io == (
            InputRequested("Input number1"),
            InputConsumed("Input number1", "91"),
        )
        assert trace.steps[12].io == (OutputEmitted("The sum of numbers is500"),)
        assert trace.outputs == ("The sum of numbers is500",)

    def test_statement_text_is_raw_source(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.steps[2].statement_text == "Dim num (1) As Integer"
        assert trace.steps[5].statement_text == "sum= sum + num(i)"

    def test_recheck_step_has_headline_only(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert len(trace.steps[7].annotations) == 1
        assert len(trace.steps[11].annotations) == 1

    def test_interactive_input_flow(self, golden_program):
        session = new_session(golden_program)
        for _ in range(4):
            assert isinstance(session.step(), TraceStep)
        outcome = session.step()
        assert outcome == AwaitingInput("Input number0")
        assert session.status is Status.AWAITING_INPUT
        # stepping while starved is idempotent
        assert session.step() == AwaitingInput("Input number0")
        assert session.provide_input("409") is Status.READY
        step = session.step()
        assert isinstance(step, TraceStep)
        assert step.line == 5 and step.index == 4
        session.provide_input("91")
        trace = session.run_to_end()
        assert trace.status is Status.FINISHED
        assert len(trace.steps) == 13


class TestSnapshots:
    def test_snapshot_minus_one_is_empty(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert snapshot_at(trace, -1) == ()

    def test_snapshot_matches_step_ram(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        for k in range(len(trace.steps)):
            assert snapshot_at(trace, k) == trace.steps[k].ram_after

    def test_snapshot_out_of_range(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        with pytest.raises(IndexError):
            snapshot_at(trace, 13)
        with pytest.raises(IndexError):
            snapshot_at(trace, -2)


class TestForSemantics:
    def test_skipped_loop_still_assigns_counter(self):
        trace = run_text("For i As Integer = 5 To 1\nNext\nMsgBox(i)")
        assert [s.line for s in trace.steps] == [1, 3]
        assert trace.steps[0].ram_after == (cell("i", 5),)
        assert trace.outputs == ("5",)

    def test_negative_step_counts_down(self):
        trace = run_text(
            "Dim t As Integer\nt = 0\n"
            "For i As Integer = 3 To 1 Step -1\nt = t + i\nNext\nMsgBox(t)"
        )
        assert trace.outputs == ("6",)

    def test_step_two_skips_values(self):
        trace = run_text(
            "Dim t As Integer\nt = 0\n"
            "For i As Integer = 0 To 5 Step 2\nt = t + 1\nNext\nMsgBox(t)"
        )
        assert trace.outputs == ("3",)
        final = {c.name: c.state for c in trace.steps[-1].ram_after}
        assert final["i"] == Holds(IntegerValue(6))

    def test_bounds_evaluated_once_at_entry(self):
        trace = run_text(
            "Dim n As Integer\nn = 2\n"
            "For i As Integer = 0 To n\nn = 0\nNext\nMsgBox(i)"
        )
        # the loop still runs to the original bound 2
        assert trace.outputs == ("3",)

    def test_counter_visible_after_loop(self):
        trace = run_text("For i As Integer = 0 To 2\nNext\nMsgBox(i)")
        assert trace.outputs == ("3",)

    def test_loop_reentry_reinitializes(self):
        trace = run_text(
            "Dim t As Integer\nt = 0\n"
            "For i As Integer = 0 To 1\n"
            "For j As Integer = 0 To 1\nt = t + 1\nNext\n"
            "Next\nMsgBox(t)"
        )
        assert trace.outputs == ("4",)

    def test_nested_loop_creates_inner_counter_once(self):
        trace = run_text(
            "For i As Integer = 0 To 1\n"
            "For j As Integer = 0 To 0\n"
            "Next\nNext"
        )
        names = [c.name for c in trace.steps[-1].ram_after]
        assert names == ["i", "j"]

    def test_counter_reassignment_in_body_drives_next(self):
        trace = run_text(
            "For i As Integer = 0 To 10\ni = i + 4\nNext\nMsgBox(i)"
        )
        # body jumps: 0->4, Next bumps to 5; 5->9, bump 10; 10->14, bump 15
        assert trace.outputs == ("15",)


class TestIfSemantics:
    def test_true_branch_runs_then_skips_else(self):
        trace = run_text(
            "Dim x As Integer\nx = 1\n"
            "If x > 0 Then\nMsgBox(\"yes\")\nElse\nMsgBox(\"no\")\nEnd If\n"
            "MsgBox(\"after\")"
        )
        assert trace.outputs == ("yes", "after")
        assert [s.line for s in trace.steps] == [1, 2, 3, 4, 5, 8]

    def test_false_branch_jumps_to_else(self):
        trace = run_text(
            "Dim x As Integer\nx = 0\n"
            "If x > 0 Then\nMsgBox(\"yes\")\nElse\nMsgBox(\"no\")\nEnd If"
        )
        assert trace.outputs == ("no",)
        assert [s.line for s in trace.steps] == [1, 2, 3, 6, 7]

    def test_false_without_else_skips_block(self):
        trace = run_text(
            "Dim x As Integer\nx = 0\n"
            "If x > 0 Then\nMsgBox(\"yes\")\nEnd If\nMsgBox(\"after\")"
        )
        assert trace.outputs == ("after",)
        assert [s.line for s in trace.steps] == [1, 2, 3, 6]

    def test_end_if_is_a_visible_noop_step(self):
        trace = run_text(
            "Dim x As Integer\nx = 1\nIf x > 0 Then\nEnd If"
        )
        last = trace.steps[-1]
        assert last.line == 4
        assert last.ram_after == trace.steps[-2].ram_after

    def test_text_equality_condition(self):
        trace = run_text(
            'Dim s As String\ns = "go"\n'
            'If s = "go" Then\nMsgBox("moved")\nEnd If'
        )
        assert trace.outputs == ("moved",)


class TestValuesAndOperators:
    def test_concatenation_renders_integers_without_spaces(self):
        trace = run_text('Dim n As Integer\nn = 500\nMsgBox("is" + n)')
        assert trace.outputs == ("is500",)

    def test_integer_plus_integer_adds(self):
        trace = run_text("MsgBox(2 + 3)")
        assert trace.outputs == ("5",)

    def test_integer_division_truncates_toward_zero(self):
        assert run_text("MsgBox(-7 \\ 2)").outputs == ("-3",)
        assert run_text("MsgBox(7 \\ -2)").outputs == ("-3",)
        assert run_text("MsgBox(7 \\ 2)").outputs == ("3",)

    def test_mod_takes_sign_of_dividend(self):
        assert run_text("MsgBox(-7 Mod 2)").outputs == ("-1",)
        assert run_text("MsgBox(7 Mod -2)").outputs == ("1",)

    def test_string_input_keeps_raw_text(self):
        trace = run_text(
            'Dim s As String\ns = InputBox("q")\nMsgBox(s + "!")',
            inputs=("  spaced  ",),
        )
        assert trace.outputs == ("  spaced  !",)

    def test_integer_input_trims_whitespace(self):
        trace = run_text(
            'Dim n As Integer\nn = InputBox("q")\nMsgBox(n)',
            inputs=("  42  ",),
        )
        assert trace.outputs == ("42",)

    def test_negative_input_accepted(self):
        trace = run_text(
            'Dim n As Integer\nn = InputBox("q")\nMsgBox(n)', inputs=("-7",)
        )
        assert trace.outputs == ("-7",)


class TestFaults:
    def fault_of(self, text, inputs=()):
        trace = run_text(text, inputs=inputs)
        assert trace.status is Status.FAULTED
        assert trace.fault is not None
        return trace

    def test_not_a_number(self):
        trace = self.fault_of(
            'Dim n As Integer\nn = InputBox("q")', inputs=("abc",)
        )
        fault = trace.fault
        assert fault.kind is FaultKind.NOT_A_NUMBER
        assert fault.line == 2
        assert fault.suggestion == "Type a whole number such as 42"

    def test_faulted_step_commits_nothing(self):
        trace = self.fault_of(
            'Dim n As Integer\nn = InputBox("q")', inputs=("abc",)
        )
        # no step was appended for line 2 and the cell is still reserved
        assert [s.line for s in trace.steps] == [1]
        assert trace.steps[-1].ram_after == (cell("n"),)

    def test_value_not_set(self):
        trace = self.fault_of("Dim a As Integer\nDim b As Integer\nb = a + 1")
        assert trace.fault.kind is FaultKind.VALUE_NOT_SET
        assert trace.fault.line == 3
        assert "'a' has no value yet" in trace.fault.message

    def test_index_out_of_range(self):
        trace = self.fault_of("Dim a(1) As Integer\na(2) = 5")
        assert trace.fault.kind is FaultKind.INDEX_OUT_OF_RANGE
        assert "a(0) to a(1)" in trace.fault.message

    def test_division_by_zero(self):
        trace = self.fault_of("Dim z As Integer\nz = 0\nz = 1 \\ z")
        assert trace.fault.kind is FaultKind.DIVISION_BY_ZERO

    def test_mod_by_zero(self):
        trace = self.fault_of("Dim z As Integer\nz = 0\nz = 1 Mod z")
        assert trace.fault.kind is FaultKind.DIVISION_BY_ZERO

    def test_overflow_on_multiplication(self):
        trace = self.fault_of(
            "Dim big As Integer\nbig = 9223372036854775807\nbig = big * 2"
        )
        assert trace.fault.kind is FaultKind.OVERFLOW

    def test_overflow_on_counter_bump(self):
        trace = self.fault_of(
            "For i As Integer = 9223372036854775806 "
            "To 9223372036854775807\nNext"
        )
        assert trace.fault.kind is FaultKind.OVERFLOW
        assert trace.fault.line == 2  # the Next does the bumping

    def test_skipped_declaration_makes_writes_fault(self):
        trace = self.fault_of(
            "Dim x As Integer\nx = 1\n"
            "If x < 0 Then\nFor i As Integer = 0 To 1\nNext\nEnd If\n"
            "i = 5"
        )
        assert trace.fault.kind is FaultKind.VALUE_NOT_SET
        assert trace.fault.line == 7

    def test_session_stays_faulted(self):
        session = new_session(compile_text("Dim z As Integer\nz = 1 \\ 0"))
        session.run_to_end()
        assert session.status is Status.FAULTED
        outcome = session.step()
        assert isinstance(outcome, Faulted)
        assert session.provide_input("1") is Status.FAULTED

    def test_every_fault_has_a_suggestion(self):
        cases = [
            ("Dim z As Integer\nz = 1 \\ 0", ()),
            ("Dim a As Integer\nDim b As Integer\na = b", ()),
            ("Dim a(0) As Integer\na(1) = 1", ()),
            ('Dim n As Integer\nn = InputBox("q")', ("x",)),
            ("Dim big As Integer\nbig = 9223372036854775807 + 1", ()),
        ]
        for text, inputs in cases:
            trace = run_text(text, inputs=inputs)
            assert trace.status is Status.FAULTED
            assert trace.fault.suggestion, text


class TestStepCap:
    INFINITE = "For i As Integer = 0 To 5 Step 0\nNext\nMsgBox(\"done\")"

    def test_truncates_at_cap(self):
        trace = run_text(self.INFINITE, step_cap=50)
        assert trace.status is Status.TRUNCATED
        assert len(trace.steps) == 50
        fault = trace.fault
        assert fault.kind is FaultKind.INFINITE_LOOP_SUSPECTED
        assert fault.suggestion == "Check that your loop condition can become false."
        assert trace.outputs == ()

    def test_truncated_session_stays_truncated(self):
        session = new_session(compile_text(self.INFINITE), step_cap=10)
        session.run_to_end()
        assert isinstance(session.step(), Truncated)

    def test_manual_stepping_hits_the_same_cap(self):
        manual = new_session(compile_text(self.INFINITE), step_cap=25)
        while isinstance(manual.step(), TraceStep):
            pass
        auto = new_session(compile_text(self.INFINITE), step_cap=25)
        assert manual.trace() == auto.run_to_end()

    def test_program_finishing_exactly_at_cap_finishes(self):
        text = "Dim x As Integer\nx = 1\nx = 2"
        trace = run_text(text, step_cap=3)
        assert trace.status is Status.FINISHED
        assert len(trace.steps) == 3


class TestSessionLifecycle:
    def test_finished_session_stays_finished(self):
        session = new_session(compile_text("Dim x As Integer"))
        trace = session.run_to_end()
        assert trace.status is Status.FINISHED
        assert isinstance(session.step(), Finished)

    def test_empty_program_finishes_with_no_steps(self):
        trace = run_text("' nothing but a comment")
        assert trace.status is Status.FINISHED
        assert trace.steps == ()

    def test_preloaded_inputs_consumed_in_order(self):
        trace = run_text(
            'Dim a As Integer\nDim b As Integer\n'
            'a = InputBox("a")\nb = InputBox("b")\nMsgBox(a - b)',
            inputs=("10", "4"),
        )
        assert trace.outputs == ("6",)

    def test_starved_run_reports_awaiting_input(self):
        session = new_session(compile_text('Dim a As Integer\na = InputBox("a")'))
        trace = session.run_to_end()
        assert trace.status is Status.AWAITING_INPUT
        assert session.pending_prompt == "a"

    def test_two_inputs_in_one_statement(self):
        trace = run_text(
            'Dim s As String\ns = InputBox("x") + InputBox("y")\nMsgBox(s)',
            inputs=("ab", "cd"),
        )
        assert trace.outputs == ("abcd",)
        step = trace.steps[1]
        assert step.io == (
            InputRequested("x"),
            InputConsumed("x", "ab"),
            InputRequested("y"),
            InputConsumed("y", "cd"),
        )

    def test_partial_input_starvation_consumes_nothing(self):
        session = new_session(
            compile_text('Dim s As String\ns = InputBox("x") + InputBox("y")')
        )
        session.provide_input("ab")
        session.step()
        outcome = session.step()
        assert outcome == AwaitingInput("y")
        session.provide_input("cd")
        final = session.step()
        assert isinstance(final, TraceStep)
        assert final.io == (
            InputRequested("x"),
            InputConsumed("x", "ab"),
            InputRequested("y"),
            InputConsumed("y", "cd"),
        )


class TestAnnotations:
    def test_declaration_captions(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.steps[0].annotations[1] == (
            "A memory location is reserved for holding a value "
            "to be assigned to sum."
        )
        assert trace.steps[2].annotations[1:] == (
            "Memory location is reserved for holding the first element "
            "of array num.",
            "Memory location is reserved for holding the second element "
            "of array num.",
        )

    def test_assignment_caption(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.steps[1].annotations[1] == (
            "A memory location holding 0 as the current value of sum."
        )

    def test_input_caption(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        assert trace.steps[4].annotations[1] == (
            "A memory location reserved for the first element of array num "
            "is now holding number 409."
        )

    def test_eleventh_element_uses_plain_numbering(self):
        trace = run_text("Dim a(10) As Integer")
        assert trace.steps[0].annotations[11] == (
            "Memory location is reserved for holding element 10 of array a."
        )

    def test_every_changed_cell_is_named_in_annotations(self, golden_program):
        trace = new_session(golden_program,
                            initial_inputs=("409", "91")).run_to_end()
        previous = ()
        for step in trace.steps:
            before = dict(previous)
            for ram_cell in step.ram_after:
                if before.get(ram_cell.name) != ram_cell.state:
                    joined = " ".join(step.annotations)
                    assert ram_cell.name in joined
            previous = [(c.name, c.state) for c in step.ram_after]
