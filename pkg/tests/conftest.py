import sys
from pathlib import Path

import pytest

from mtlviz import CheckedProgram, SourceProgram, analyze

TESTS_DIR = Path(__file__).resolve().parent
GOLDEN_DIR = TESTS_DIR / "golden"

# make sibling test helpers (oracle, genprog) importable as plain modules
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))


def compile_text(text: str) -> CheckedProgram:
    program, diagnostics = analyze(SourceProgram.from_text(text))
    assert program is not None, [str(d) for d in diagnostics]
    return program


@pytest.fixture
def golden_source() -> SourceProgram:
    raw = (GOLDEN_DIR / "sum_two_numbers.mtl").read_text(encoding="utf-8")
    return SourceProgram.from_text(raw)


@pytest.fixture
def golden_program(golden_source) -> CheckedProgram:
    program, diagnostics = analyze(golden_source)
    assert program is not None, [str(d) for d in diagnostics]
    return program
