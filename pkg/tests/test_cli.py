import os
import re
import subprocess
import sys

import pytest

from conftest import GOLDEN_DIR

GOLDEN_FILE = str(GOLDEN_DIR / "sum_two_numbers.mtl")
DIAGNOSTIC_LINE = re.compile(r"^\d+:\d+: error: .+ \(hint: .+\)$")

INFINITE = 'For i As Integer = 0 To 5 Step 0\nNext\nMsgBox("done")\n'


def mtlviz(*args, stdin=None, env_extra=None):
    env = {k: v for k, v in os.environ.items() if k != "MTLVIZ_STEP_CAP"}
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "mtlviz", *args],
        input=stdin,
        capture_output=True,
        text=True,
        env=env,
        timeout=60,
    )


def write_program(tmp_path, text, name="prog.mtl"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestCheck:
    def test_clean_program_exits_zero(self):
        result = mtlviz("check", GOLDEN_FILE)
        assert result.returncode == 0
        assert result.stdout == ""
        assert result.stderr == ""

    def test_diagnostics_exit_one_with_formatted_lines(self, tmp_path):
        path = write_program(tmp_path, "sum = 1\nDim sum As\n")
        result = mtlviz("check", path)
        assert result.returncode == 1
        lines = result.stderr.splitlines()
        assert lines
        for line in lines:
            assert DIAGNOSTIC_LINE.match(line), line

    def test_missing_file_exits_two(self):
        result = mtlviz("check", "no-such-file.mtl")
        assert result.returncode == 2
        assert result.stderr.strip()

    def test_directory_exits_two(self, tmp_path):
        result = mtlviz("check", str(tmp_path))
        assert result.returncode == 2
        assert result.stderr.strip()


class TestRunText:
    def test_golden_run(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "409", "--input", "91")
        assert result.returncode == 0
        assert result.stderr == ""
        assert "=> 8. MsgBox(\"The sum of numbers is\" + sum)" in result.stdout
        assert "RAM: AFTER ASSIGNMENT" in result.stdout
        assert result.stdout.endswith("Output:\n  The sum of numbers is500\n")

    def test_no_color_outside_terminal(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "1", "--input", "2")
        assert "\x1b[" not in result.stdout

    def test_color_flag_forces_highlight(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "1", "--input", "2",
                        "--color")
        assert "\x1b[7m" in result.stdout

    def test_empty_program_prints_empty_ram(self, tmp_path):
        path = write_program(tmp_path, "' just a comment\n")
        result = mtlviz("run", path)
        assert result.returncode == 0
        assert result.stdout.count("| (empty) |") == 3
        assert "Output:" not in result.stdout

    def test_fault_exits_three(self, tmp_path):
        path = write_program(tmp_path, "Dim z As Integer\nz = 1 \\ 0\n")
        result = mtlviz("run", path)
        assert result.returncode == 3
        assert result.stderr.startswith("line 2: DivisionByZero:")
        assert "(hint:" in result.stderr

    def test_starved_input_exits_four(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "409")
        assert result.returncode == 4
        assert "--input" in result.stderr
        assert '"Input number1"' in result.stderr

    def test_unused_inputs_are_fine(self):
        result = mtlviz("run", GOLDEN_FILE,
                        "--input", "1", "--input", "2", "--input", "3")
        assert result.returncode == 0


class TestRunJson:
    def test_golden_json_is_byte_identical(self):
        expected = (GOLDEN_DIR / "sum_two_numbers_trace.json").read_text()
        result = mtlviz("run", GOLDEN_FILE, "--format", "json",
                        "--input", "409", "--input", "91")
        assert result.returncode == 0
        assert result.stdout == expected + "\n"

    def test_fault_still_prints_the_trace(self, tmp_path):
        path = write_program(tmp_path, "Dim z As Integer\nz = 1 \\ 0\n")
        result = mtlviz("run", path, "--format", "json")
        assert result.returncode == 3
        assert '"fault":' in result.stdout
        assert result.stderr.strip()


class TestStepCap:
    def test_flag_truncates(self, tmp_path):
        path = write_program(tmp_path, INFINITE)
        result = mtlviz("run", path, "--step-cap", "40")
        assert result.returncode == 3
        assert "InfiniteLoopSuspected" in result.stderr
        assert "Check that your loop condition can become false." in result.stderr

    def test_env_variable_truncates(self, tmp_path):
        path = write_program(tmp_path, INFINITE)
        result = mtlviz("run", path, env_extra={"MTLVIZ_STEP_CAP": "40"})
        assert result.returncode == 3
        assert "InfiniteLoopSuspected" in result.stderr

    def test_flag_beats_env(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "1", "--input", "2",
                        "--step-cap", "100", env_extra={"MTLVIZ_STEP_CAP": "5"})
        assert result.returncode == 0

    def test_invalid_env_exits_two(self):
        result = mtlviz("run", GOLDEN_FILE, "--input", "1", "--input", "2",
                        env_extra={"MTLVIZ_STEP_CAP": "soon"})
        assert result.returncode == 2
        assert "MTLVIZ_STEP_CAP" in result.stderr

    def test_zero_flag_is_a_usage_error(self):
        result = mtlviz("run", GOLDEN_FILE, "--step-cap", "0")
        assert result.returncode == 2
        assert result.stderr.strip()


class TestStepInteractive:
    def test_full_golden_walkthrough(self):
        stdin = "\n" * 5 + "409\n" + "\n" * 4 + "91\n" + "\n" * 6
        result = mtlviz("step", GOLDEN_FILE, stdin=stdin)
        assert result.returncode == 0
        assert "Program finished." in result.stdout
        assert "  The sum of numbers is500" in result.stdout
        # the very first print is the empty three-block view
        assert result.stdout.startswith("RAM: BEFORE EXECUTION\n| (empty) |")

    def test_replay_command_shows_past_ram(self):
        stdin = "\n\nr 0\nq\n"
        result = mtlviz("step", GOLDEN_FILE, stdin=stdin)
        assert result.returncode == 0
        assert "| sum | RESERVED |" in result.stdout

    def test_replay_out_of_range_prints_usage(self):
        stdin = "\nr 99\nq\n"
        result = mtlviz("step", GOLDEN_FILE, stdin=stdin)
        assert result.returncode == 0
        assert "usage: r K where K is -1 through 0" in result.stdout

    def test_quit_immediately(self):
        result = mtlviz("step", GOLDEN_FILE, stdin="q\n")
        assert result.returncode == 0

    def test_eof_before_any_step_is_ok(self):
        result = mtlviz("step", GOLDEN_FILE, stdin="")
        assert result.returncode == 0

    def test_eof_at_input_prompt_exits_four(self, tmp_path):
        path = write_program(
            tmp_path, 'Dim a As Integer\na = InputBox("q")\n'
        )
        result = mtlviz("step", path, stdin="\n\n")
        assert result.returncode == 4
        assert result.stderr.strip()

    def test_fault_exits_three(self, tmp_path):
        path = write_program(tmp_path, "Dim z As Integer\nz = 1 \\ 0\n")
        result = mtlviz("step", path, stdin="\n\n\n")
        assert result.returncode == 3
        assert "DivisionByZero" in result.stderr

    def test_program_input_fed_through_prompt(self, tmp_path):
        path = write_program(
            tmp_path,
            'Dim a As Integer\na = InputBox("value")\nMsgBox(a + 1)\n',
        )
        stdin = "\n\n41\n\n\n"
        result = mtlviz("step", path, stdin=stdin)
        assert result.returncode == 0
        assert "  42" in result.stdout


class TestSnippet:
    def test_prints_lines(self):
        result = mtlviz("snippet", "looping", "--param", "counter=i",
                        "--param", "from=0", "--param", "to=1")
        assert result.returncode == 0
        assert result.stdout == "For i As Integer = 0 To 1\nNext\n"

    def test_snippet_error_exits_one(self):
        result = mtlviz("snippet", "declaration", "--param", "name=2x",
                        "--param", "type=Integer")
        assert result.returncode == 1
        assert result.stderr.startswith("error: ")
        assert "(hint:" in result.stderr

    def test_bad_param_syntax_exits_two(self):
        result = mtlviz("snippet", "declaration", "--param", "name")
        assert result.returncode == 2
        assert "KEY=VALUE" in result.stderr


class TestUsage:
    def test_no_arguments(self):
        result = mtlviz()
        assert result.returncode == 2
        assert result.stderr.strip()

    def test_unknown_subcommand(self):
        result = mtlviz("frobnicate")
        assert result.returncode == 2
        assert result.stderr.strip()

    def test_bad_port(self):
        result = mtlviz("serve", "--port", "70000")
        assert result.returncode == 2
        assert result.stderr.strip()

    @pytest.mark.parametrize(
        "args",
        [
            ("check", "no-such.mtl"),
            ("run", "no-such.mtl"),
            ("frobnicate",),
        ],
    )
    def test_every_nonzero_exit_writes_stderr(self, args):
        result = mtlviz(*args)
        assert result.returncode != 0
        assert result.stderr.strip()
