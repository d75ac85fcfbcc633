"""AST nodes, source handling, and diagnostics for the mini-language.

Statements and expressions compare structurally: source positions and raw
text are carried for display and error reporting but excluded from equality,
so a statement re-parsed from its canonical rendering compares equal to the
original.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

Pos = tuple[int, int]  # (line, 1-based column)

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


class ScalarType(enum.Enum):
    INTEGER = "Integer"
    STRING = "String"

    def __str__(self) -> str:
        return self.value


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """A friendly problem report tied to a source position."""

    severity: Severity
    line: int
    column: int
    message: str
    suggestion: str = ""

    def __post_init__(self) -> None:
        if self.severity is Severity.ERROR and not self.suggestion:
            raise ValueError("error diagnostics must carry a suggestion")

    def __str__(self) -> str:
        text = f"{self.line}:{self.column}: {self.severity.value}: {self.message}"
        if self.suggestion:
            text += f" (hint: {self.suggestion})"
        return text


def error(line: int, column: int, message: str, suggestion: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, line, column, message, suggestion)


@dataclass(frozen=True)
class SourceProgram:
    """Program text split into numbered lines.

    Line numbers are physical and start at 1; blank and comment lines keep
    their numbers. Joining ``lines`` with newlines reproduces ``text``.
    """

    text: str
    lines: tuple[tuple[int, str], ...]

    @classmethod
    def from_text(cls, raw: str) -> "SourceProgram":
        text = raw.replace("\r\n", "\n").replace("\r", "\n")
        if text.endswith("\n"):
            text = text[:-1]
        if not text:
            return cls(text="", lines=())
        return cls(text=text, lines=tuple(enumerate(text.split("\n"), start=1)))

    def line_text(self, line: int) -> str:
        return self.lines[line - 1][1]


# --- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class IntLiteral:
    value: int
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class StringLiteral:
    value: str
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class VarRef:
    name: str
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class ArrayRef:
    name: str
    index: "Expr"
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class InputBoxCall:
    prompt: "Expr"
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class Negate:
    operand: "Expr"
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class BinaryOp:
    op: str  # one of + - * \ Mod = <> < <= > >=
    left: "Expr"
    right: "Expr"
    pos: Pos = field(compare=False, repr=False)


Expr = IntLiteral | StringLiteral | VarRef | ArrayRef | InputBoxCall | Negate | BinaryOp

COMPARISON_OPS = frozenset({"=", "<>", "<", "<=", ">", ">="})
ARITHMETIC_OPS = frozenset({"+", "-", "*", "\\", "Mod"})


# --- statements ------------------------------------------------------------


@dataclass(frozen=True)
class DeclareScalar:
    name: str
    scalar_type: ScalarType
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class DeclareArray:
    name: str
    bound: Expr  # upper index; elements run 0..bound
    scalar_type: ScalarType
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Assign:
    target: VarRef | ArrayRef
    value: Expr
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Output:
    value: Expr
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class ForHeader:
    counter: str
    start: Expr
    end: Expr
    step: Expr | None
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class NextStmt:
    counter: str | None
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class IfHeader:
    condition: Expr
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class ElseMarker:
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class EndIfMarker:
    line: int = field(compare=False, kw_only=True)
    col: int = field(compare=False, repr=False, kw_only=True)
    text: str = field(compare=False, repr=False, kw_only=True)


Statement = (
    DeclareScalar
    | DeclareArray
    | Assign
    | Output
    | ForHeader
    | NextStmt
    | IfHeader
    | ElseMarker
    | EndIfMarker
)


# --- canonical rendering ---------------------------------------------------

_PRECEDENCE = {
    "=": 1, "<>": 1, "<": 1, "<=": 1, ">": 1, ">=": 1,
    "+": 2, "-": 2,
    "*": 3, "\\": 3, "Mod": 3,
}
_UNARY_PRECEDENCE = 4
_ATOM_PRECEDENCE = 5


def _precedence(expr: Expr) -> int:
    if isinstance(expr, BinaryOp):
        return _PRECEDENCE[expr.op]
    if isinstance(expr, Negate):
        return _UNARY_PRECEDENCE
    return _ATOM_PRECEDENCE


def render_expr(expr: Expr) -> str:
    """Render an expression in canonical form with minimal parentheses."""
    if isinstance(expr, IntLiteral):
        return str(expr.value)
    if isinstance(expr, StringLiteral):
        return f'"{expr.value}"'
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, ArrayRef):
        return f"{expr.name}({render_expr(expr.index)})"
    if isinstance(expr, InputBoxCall):
        return f"InputBox({render_expr(expr.prompt)})"
    if isinstance(expr, Negate):
        inner = render_expr(expr.operand)
        if _precedence(expr.operand) < _UNARY_PRECEDENCE:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, BinaryOp):
        # "+" is non-associative here (text concatenation mixes types), so
        # any same-precedence right child keeps its parentheses.
        prec = _PRECEDENCE[expr.op]
        left = render_expr(expr.left)
        # comparisons are single and non-associative, so a comparison child
        # must keep its parentheses even on the left
        if _precedence(expr.left) < prec or (
            prec == 1 and _precedence(expr.left) == 1
        ):
            left = f"({left})"
        right = render_expr(expr.right)
        if _precedence(expr.right) <= prec:
            right = f"({right})"
        return f"{left} {expr.op} {right}"
    raise TypeError(f"not an expression: {expr!r}")


def render_statement(stmt: Statement) -> str:
    """Render a statement in canonical form (keywords in canonical case)."""
    if isinstance(stmt, DeclareScalar):
        return f"Dim {stmt.name} As {stmt.scalar_type}"
    if isinstance(stmt, DeclareArray):
        return f"Dim {stmt.name}({render_expr(stmt.bound)}) As {stmt.scalar_type}"
    if isinstance(stmt, Assign):
        return f"{render_expr(stmt.target)} = {render_expr(stmt.value)}"
    if isinstance(stmt, Output):
        return f"MsgBox({render_expr(stmt.value)})"
    if isinstance(stmt, ForHeader):
        text = (
            f"For {stmt.counter} As Integer = "
            f"{render_expr(stmt.start)} To {render_expr(stmt.end)}"
        )
        if stmt.step is not None:
            text += f" Step {render_expr(stmt.step)}"
        return text
    if isinstance(stmt, NextStmt):
        return f"Next {stmt.counter}" if stmt.counter else "Next"
    if isinstance(stmt, IfHeader):
        return f"If {render_expr(stmt.condition)} Then"
    if isinstance(stmt, ElseMarker):
        return "Else"
    if isinstance(stmt, EndIfMarker):
        return "End If"
    raise TypeError(f"not a statement: {stmt!r}")
