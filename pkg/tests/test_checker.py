from mtlviz.lang import (
    MAX_ARRAY_BOUND,
    ScalarType,
    SourceProgram,
    analyze_text,
    check,
    parse,
)


def check_text(text):
    result = parse(SourceProgram.from_text(text))
    assert result.ok, [str(d) for d in result.diagnostics]
    return check(result.statements)


def errors_of(text):
    result = check_text(text)
    assert not result.ok
    return result.diagnostics


class TestDeclarations:
    def test_clean_program_produces_tables(self):
        result = check_text(
            "Dim sum As Integer\n"
            "Dim num(1) As String\n"
            "For i As Integer = 0 To 1\n"
            "Next\n"
            "sum = 0"
        )
        assert result.ok
        program = result.program
        assert set(program.symbols) == {"sum", "num", "i"}
        assert program.symbols["num"].array_bound == 1
        assert program.symbols["i"].scalar_type is ScalarType.INTEGER
        assert program.for_to_next == {3: 4}
        assert program.next_to_for == {4: 3}
        assert program.line_to_index == {1: 0, 2: 1, 3: 2, 4: 3, 5: 4}

    def test_duplicate_declaration(self):
        diags = errors_of("Dim a As Integer\nDim a As String")
        assert "'a' is already declared on line 1" in diags[0].message
        assert diags[0].line == 2

    def test_duplicate_is_case_insensitive(self):
        diags = errors_of("Dim total As Integer\nDim TOTAL As Integer")
        assert "already declared" in diags[0].message

    def test_canonical_spelling_is_first_declared(self):
        result = check_text("Dim Total As Integer\nTOTAL = 3")
        assert result.ok
        assert result.program.symbols["total"].canonical == "Total"

    def test_for_counter_collides_with_dim(self):
        diags = errors_of(
            "Dim i As Integer\nFor i As Integer = 0 To 1\nNext"
        )
        assert "'i' is already declared on line 1" in diags[0].message

    def test_use_before_declaration(self):
        diags = errors_of("sum = 0")
        assert diags[0].message == "'sum' is used before it is declared"
        assert "Dim sum As Integer" in diags[0].suggestion

    def test_use_above_the_declaration_line(self):
        diags = errors_of("x = 1\nDim x As Integer")
        assert diags[0].message == "'x' is used before it is declared"

    def test_dim_inside_block_rejected(self):
        diags = errors_of(
            "For i As Integer = 0 To 1\nDim x As Integer\nNext"
        )
        assert "cannot appear inside" in diags[0].message

    def test_array_bound_must_be_constant(self):
        diags = errors_of(
            "Dim n As Integer\nn = 1\nDim a(n) As Integer"
        )
        assert "constant whole number" in diags[0].message

    def test_array_bound_must_be_non_negative(self):
        diags = errors_of("Dim a(-1) As Integer")
        assert "constant whole number" in diags[0].message

    def test_array_bound_may_be_constant_expression(self):
        result = check_text("Dim a(2 + 3) As Integer")
        assert result.ok
        assert result.program.symbols["a"].array_bound == 5

    def test_array_bound_cap(self):
        result = check_text(f"Dim a({MAX_ARRAY_BOUND}) As Integer")
        assert result.ok
        diags = errors_of(f"Dim a({MAX_ARRAY_BOUND + 1}) As Integer")
        assert "too large" in diags[0].message


class TestBlocks:
    def test_for_without_next(self):
        diags = errors_of("For i As Integer = 0 To 1")
        assert diags[0].message == "this For has no matching Next"

    def test_next_without_for(self):
        diags = errors_of("Next")
        assert diags[0].message == "this Next has no matching For"

    def test_if_without_end_if(self):
        diags = errors_of("Dim x As Integer\nx = 1\nIf x > 0 Then")
        assert diags[0].message == "this If has no matching End If"

    def test_end_if_without_if(self):
        diags = errors_of("End If")
        assert "no matching If" in diags[0].message

    def test_else_outside_if(self):
        diags = errors_of("Else")
        assert "not directly inside an If" in diags[0].message

    def test_double_else(self):
        diags = errors_of(
            "Dim x As Integer\nx = 0\nIf x > 0 Then\nElse\nElse\nEnd If"
        )
        assert "already has an Else" in diags[0].message

    def test_overlapping_for_and_if(self):
        diags = errors_of(
            "Dim x As Integer\nx = 0\n"
            "For i As Integer = 0 To 1\nIf x > 0 Then\nNext\nEnd If"
        )
        assert any("would close an If block" in d.message for d in diags)

    def test_next_counter_mismatch(self):
        diags = errors_of(
            "For i As Integer = 0 To 1\nNext j"
        )
        assert "this Next names 'j', but the loop counter is 'i'" in diags[0].message

    def test_next_counter_match_is_case_insensitive(self):
        assert check_text("For i As Integer = 0 To 1\nNext I").ok

    def test_nested_blocks_map_correctly(self):
        result = check_text(
            "Dim x As Integer\nx = 0\n"
            "For i As Integer = 0 To 1\n"
            "If x > 0 Then\n"
            "x = 1\n"
            "Else\n"
            "x = 2\n"
            "End If\n"
            "Next"
        )
        assert result.ok
        program = result.program
        assert program.for_to_next == {3: 9}
        block = program.if_blocks[4]
        assert block.else_line == 6 and block.end_line == 8
        assert program.else_to_if[6] is block


class TestTypes:
    def test_integer_minus_string_rejected(self):
        diags = errors_of('Dim s As String\ns = "a"\nDim x As Integer\nx = 1 - s')
        assert "needs Integer values" in diags[0].message

    def test_plus_concatenates_mixed_types(self):
        assert check_text(
            'Dim s As String\nDim x As Integer\nx = 1\ns = "n" + x'
        ).ok

    def test_string_expression_into_integer_rejected(self):
        diags = errors_of('Dim x As Integer\nx = "12"')
        assert "holds an Integer" in diags[0].message

    def test_inputbox_into_integer_allowed(self):
        assert check_text('Dim x As Integer\nx = InputBox("n")').ok

    def test_inputbox_plus_text_into_integer_rejected(self):
        diags = errors_of('Dim x As Integer\nx = InputBox("n") + "1"')
        assert "holds an Integer" in diags[0].message

    def test_integer_into_string_rejected(self):
        diags = errors_of("Dim s As String\ns = 42")
        assert "holds text" in diags[0].message

    def test_array_used_without_index(self):
        diags = errors_of("Dim a(1) As Integer\nDim x As Integer\nx = a")
        assert "give it an index" in diags[0].message

    def test_scalar_indexed(self):
        diags = errors_of("Dim x As Integer\nx(0) = 1")
        assert "cannot be indexed" in diags[0].message

    def test_assigning_whole_array(self):
        diags = errors_of("Dim a(1) As Integer\na = 1")
        assert "assign to one element" in diags[0].message

    def test_string_index_rejected(self):
        diags = errors_of('Dim a(1) As Integer\na("x") = 1')
        assert "index must be an Integer" in diags[0].message

    def test_comparison_outside_if_rejected(self):
        diags = errors_of("Dim x As Integer\nx = (1 < 2)")
        assert "condition of an If line" in diags[0].message

    def test_comparison_nested_in_condition_rejected(self):
        diags = errors_of("Dim x As Integer\nx = 1\nIf (x < 2) = 1 Then\nEnd If")
        assert any("condition of an If line" in d.message for d in diags)

    def test_condition_must_compare(self):
        diags = errors_of("Dim x As Integer\nx = 1\nIf x Then\nEnd If")
        assert "must be a comparison" in diags[0].message

    def test_text_ordering_comparison_rejected(self):
        diags = errors_of(
            'Dim s As String\ns = "a"\nIf s < "b" Then\nEnd If'
        )
        assert "text can only be compared with = or <>" in diags[0].message

    def test_mixed_comparison_rejected(self):
        diags = errors_of(
            'Dim s As String\ns = "a"\nIf s = 1 Then\nEnd If'
        )
        assert "cannot compare a number with text" in diags[0].message

    def test_text_equality_comparison_allowed(self):
        assert check_text(
            'Dim s As String\ns = "a"\nIf s <> "b" Then\nEnd If'
        ).ok

    def test_loop_bounds_must_be_integers(self):
        diags = errors_of('For i As Integer = "a" To 3\nNext')
        assert "loop bounds must be Integer" in diags[0].message


class TestDiagnosticsContract:
    def test_sorted_by_position(self):
        diags = errors_of(
            "z = 1\nDim a As Integer\nDim a As Integer\ny = a + b"
        )
        positions = [(d.line, d.column) for d in diags]
        assert positions == sorted(positions)

    def test_all_errors_carry_suggestions(self):
        cases = [
            "sum = 0",
            "Dim a As Integer\nDim a As Integer",
            "Next",
            "For i As Integer = 0 To 1",
            "Dim a(-1) As Integer",
            "Dim s As String\ns = 5",
            "Dim x As Integer\nx = (1 > 2)",
        ]
        for text in cases:
            program, diags = analyze_text(text)
            assert program is None
            for diag in diags:
                assert diag.suggestion, text
