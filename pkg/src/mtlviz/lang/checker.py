"""Static checks: declarations, block structure, and expression types.

The checker runs three passes (declarations, block matching, references)
so that one mistake does not hide unrelated ones; diagnostics come back
sorted by position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import (
    ArrayRef,
    Assign,
    BinaryOp,
    COMPARISON_OPS,
    DeclareArray,
    DeclareScalar,
    Diagnostic,
    ElseMarker,
    EndIfMarker,
    Expr,
    ForHeader,
    IfHeader,
    InputBoxCall,
    IntLiteral,
    INT_MAX,
    INT_MIN,
    Negate,
    NextStmt,
    Output,
    ScalarType,
    Statement,
    StringLiteral,
    VarRef,
    error,
)

MAX_ARRAY_BOUND = 1000  # upper index cap; keeps RAM diagrams readable


@dataclass(frozen=True)
class SymbolInfo:
    canonical: str  # first-declared spelling, used for RAM cell names
    scalar_type: ScalarType
    array_bound: int | None  # None for scalars; k means elements 0..k
    decl_line: int

    @property
    def is_array(self) -> bool:
        return self.array_bound is not None


@dataclass(frozen=True)
class IfBlock:
    if_line: int
    else_line: int | None
    end_line: int


@dataclass(frozen=True)
class CheckedProgram:
    """A parsed program that passed every static check."""

    statements: tuple[Statement, ...]
    symbols: dict[str, SymbolInfo]  # keyed by lowercased name
    for_to_next: dict[int, int]
    next_to_for: dict[int, int]
    if_blocks: dict[int, IfBlock]  # keyed by the If line
    else_to_if: dict[int, IfBlock]  # keyed by the Else line
    line_to_index: dict[int, int]

    def symbol(self, name: str) -> SymbolInfo:
        return self.symbols[name.lower()]

    def index_of_line(self, line: int) -> int:
        return self.line_to_index[line]


@dataclass(frozen=True)
class CheckResult:
    program: CheckedProgram | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.program is not None


def check(statements: tuple[Statement, ...]) -> CheckResult:
    diags: list[Diagnostic] = []
    symbols = _collect_symbols(statements, diags)
    for_to_next, next_to_for, if_blocks = _check_blocks(statements, diags)
    _RefChecker(symbols, diags).check_statements(statements)
    diags.sort(key=lambda d: (d.line, d.column))
    if diags:
        return CheckResult(None, tuple(diags))
    program = CheckedProgram(
        statements=statements,
        symbols=symbols,
        for_to_next=for_to_next,
        next_to_for=next_to_for,
        if_blocks={blk.if_line: blk for blk in if_blocks},
        else_to_if={
            blk.else_line: blk for blk in if_blocks if blk.else_line is not None
        },
        line_to_index={s.line: i for i, s in enumerate(statements)},
    )
    return CheckResult(program, ())


# --- pass A: declarations ---------------------------------------------------


def _collect_symbols(
    statements: tuple[Statement, ...], diags: list[Diagnostic]
) -> dict[str, SymbolInfo]:
    symbols: dict[str, SymbolInfo] = {}

    def declare(name: str, info: SymbolInfo, col: int, counter: bool) -> None:
        key = name.lower()
        prev = symbols.get(key)
        if prev is not None:
            suggestion = (
                "Pick a fresh counter name for this loop"
                if counter
                else "Use a different name, or remove this declaration"
            )
            diags.append(error(
                info.decl_line, col,
                f"'{name}' is already declared on line {prev.decl_line}",
                suggestion,
            ))
            return
        symbols[key] = info

    for stmt in statements:
        if isinstance(stmt, DeclareScalar):
            declare(
                stmt.name,
                SymbolInfo(stmt.name, stmt.scalar_type, None, stmt.line),
                stmt.col,
                counter=False,
            )
        elif isinstance(stmt, DeclareArray):
            bound = _const_bound(stmt, diags)
            declare(
                stmt.name,
                SymbolInfo(stmt.name, stmt.scalar_type, bound, stmt.line),
                stmt.col,
                counter=False,
            )
        elif isinstance(stmt, ForHeader):
            declare(
                stmt.counter,
                SymbolInfo(stmt.counter, ScalarType.INTEGER, None, stmt.line),
                stmt.col,
                counter=True,
            )
    return symbols


def _const_bound(stmt: DeclareArray, diags: list[Diagnostic]) -> int:
    value = _const_eval(stmt.bound)
    if value is None or value < 0:
        diags.append(error(
            stmt.line, stmt.col,
            "the array size must be a constant whole number of 0 or more",
            "Write e.g. Dim num(1) As Integer",
        ))
        return 0
    if value > MAX_ARRAY_BOUND:
        diags.append(error(
            stmt.line, stmt.col,
            "this array is too large to visualize",
            f"Use an upper index of {MAX_ARRAY_BOUND} or less",
        ))
        return 0
    return value


def _const_eval(expr: Expr) -> int | None:
    """Evaluate a literal-only Integer expression, or None."""
    if isinstance(expr, IntLiteral):
        return expr.value
    if isinstance(expr, Negate):
        value = _const_eval(expr.operand)
        return None if value is None else _fit(-value)
    if isinstance(expr, BinaryOp):
        left = _const_eval(expr.left)
        right = _const_eval(expr.right)
        if left is None or right is None:
            return None
        if expr.op == "+":
            return _fit(left + right)
        if expr.op == "-":
            return _fit(left - right)
        if expr.op == "*":
            return _fit(left * right)
        if expr.op == "\\":
            return None if right == 0 else _fit(_trunc_div(left, right))
        if expr.op == "Mod":
            return None if right == 0 else _fit(_trunc_mod(left, right))
        return None
    return None


def _fit(value: int) -> int | None:
    return value if INT_MIN <= value <= INT_MAX else None


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _trunc_mod(a: int, b: int) -> int:
    return a - _trunc_div(a, b) * b


# --- pass B: block structure ------------------------------------------------


@dataclass
class _OpenIf:
    if_line: int
    else_line: int | None = None


@dataclass
class _OpenFor:
    stmt: ForHeader


def _check_blocks(
    statements: tuple[Statement, ...], diags: list[Diagnostic]
) -> tuple[dict[int, int], dict[int, int], list[IfBlock]]:
    for_to_next: dict[int, int] = {}
    next_to_for: dict[int, int] = {}
    if_blocks: list[IfBlock] = []
    stack: list[_OpenIf | _OpenFor] = []

    for stmt in statements:
        if isinstance(stmt, (DeclareScalar, DeclareArray)) and stack:
            opener = stack[-1]
            line = opener.if_line if isinstance(opener, _OpenIf) else opener.stmt.line
            diags.append(error(
                stmt.line, stmt.col,
                "a Dim cannot appear inside a For or If block",
                f"Move the declaration above line {line}",
            ))
        elif isinstance(stmt, ForHeader):
            stack.append(_OpenFor(stmt))
        elif isinstance(stmt, NextStmt):
            if not stack:
                diags.append(error(
                    stmt.line, stmt.col,
                    "this Next has no matching For",
                    "Start the loop with a For line above",
                ))
            elif isinstance(stack[-1], _OpenIf):
                diags.append(error(
                    stmt.line, stmt.col,
                    "this Next would close an If block",
                    "Close the If with End If before Next",
                ))
            else:
                opened = stack.pop()
                header = opened.stmt
                if (
                    stmt.counter is not None
                    and stmt.counter.lower() != header.counter.lower()
                ):
                    diags.append(error(
                        stmt.line, stmt.col,
                        f"this Next names '{stmt.counter}', but the loop "
                        f"counter is '{header.counter}'",
                        f"Write Next {header.counter} or just Next",
                    ))
                for_to_next[header.line] = stmt.line
                next_to_for[stmt.line] = header.line
        elif isinstance(stmt, IfHeader):
            stack.append(_OpenIf(stmt.line))
        elif isinstance(stmt, ElseMarker):
            if not stack or not isinstance(stack[-1], _OpenIf):
                diags.append(error(
                    stmt.line, stmt.col,
                    "this Else is not directly inside an If block",
                    "Start the block with If ... Then",
                ))
            elif stack[-1].else_line is not None:
                diags.append(error(
                    stmt.line, stmt.col,
                    "this If already has an Else",
                    "Remove the extra Else",
                ))
            else:
                stack[-1].else_line = stmt.line
        elif isinstance(stmt, EndIfMarker):
            if not stack or not isinstance(stack[-1], _OpenIf):
                diags.append(error(
                    stmt.line, stmt.col,
                    "this End If has no matching If",
                    "Start the block with If ... Then",
                ))
            else:
                opened = stack.pop()
                if_blocks.append(IfBlock(opened.if_line, opened.else_line, stmt.line))

    for opened in stack:
        if isinstance(opened, _OpenFor):
            diags.append(error(
                opened.stmt.line, opened.stmt.col,
                "this For has no matching Next",
                "Add a Next line after the loop body",
            ))
        else:
            line = opened.if_line
            diags.append(error(
                line, 1,
                "this If has no matching End If",
                "Add an End If line after the branch",
            ))
    return for_to_next, next_to_for, if_blocks


# --- pass C: references and types -------------------------------------------


@dataclass
class _RefChecker:
    symbols: dict[str, SymbolInfo]
    diags: list[Diagnostic]
    line: int = field(default=0)

    def check_statements(self, statements: tuple[Statement, ...]) -> None:
        for stmt in statements:
            self.line = stmt.line
            self.check_statement(stmt)

    def check_statement(self, stmt: Statement) -> None:
        if isinstance(stmt, Assign):
            self._check_assign(stmt)
        elif isinstance(stmt, Output):
            self.infer(stmt.value)
        elif isinstance(stmt, ForHeader):
            for part in (stmt.start, stmt.end, stmt.step):
                if part is not None and self.infer(part) is ScalarType.STRING:
                    self._error_at(
                        part,
                        "loop bounds must be Integer values",
                        f"Write e.g. For {stmt.counter} As Integer = 0 To 1",
                    )
        elif isinstance(stmt, IfHeader):
            self._check_condition(stmt)

    def _check_assign(self, stmt: Assign) -> None:
        target_type = self._target_type(stmt.target)
        value_type = self.infer(stmt.value)
        if target_type is None or value_type is None:
            return
        if target_type is value_type:
            return
        name = _target_text(stmt.target)
        if target_type is ScalarType.INTEGER:
            if isinstance(stmt.value, InputBoxCall):
                return  # input text is converted to a number when assigned
            self._error_at(
                stmt.value,
                f"'{name}' holds an Integer, but this value is text",
                f"Assign a number, e.g. {name} = 0, or read one with "
                f'{name} = InputBox("...")',
            )
        else:
            self._error_at(
                stmt.value,
                f"'{name}' holds text, but this value is a number",
                f'Put the value in quotes, e.g. {name} = "42"',
            )

    def _target_type(self, target: VarRef | ArrayRef) -> ScalarType | None:
        info = self._lookup(target.name, target.pos)
        if info is None:
            return None
        if isinstance(target, VarRef) and info.is_array:
            self._error_pos(
                target.pos,
                f"'{target.name}' is an array; assign to one element",
                f"Write e.g. {target.name}(0) = ...",
            )
            return None
        if isinstance(target, ArrayRef):
            if not info.is_array:
                self._error_pos(
                    target.pos,
                    f"'{target.name}' is not an array and cannot be indexed",
                    f"Use just {target.name} without parentheses",
                )
                return None
            self._check_index(target)
        return info.scalar_type

    def _check_condition(self, stmt: IfHeader) -> None:
        cond = stmt.condition
        if not (isinstance(cond, BinaryOp) and cond.op in COMPARISON_OPS):
            self._error_at(
                cond,
                "the If condition must be a comparison",
                "Compare two values, e.g. If x > 0 Then",
            )
            self.infer(cond)
            return
        left = self.infer(cond.left)
        right = self.infer(cond.right)
        if left is None or right is None:
            return
        if left is not right:
            self._error_at(
                cond,
                "cannot compare a number with text",
                "Compare two numbers or two pieces of text",
            )
        elif left is ScalarType.STRING and cond.op not in ("=", "<>"):
            self._error_at(
                cond,
                f"text can only be compared with = or <>, not '{cond.op}'",
                "Use = or <> for text, or compare numbers",
            )

    def infer(self, expr: Expr) -> ScalarType | None:
        """Return the expression's type, or None after reporting a problem."""
        if isinstance(expr, IntLiteral):
            return ScalarType.INTEGER
        if isinstance(expr, StringLiteral):
            return ScalarType.STRING
        if isinstance(expr, VarRef):
            info = self._lookup(expr.name, expr.pos)
            if info is None:
                return None
            if info.is_array:
                self._error_pos(
                    expr.pos,
                    f"'{expr.name}' is an array; give it an index",
                    f"Write {expr.name}(0) through {expr.name}({info.array_bound})",
                )
                return None
            return info.scalar_type
        if isinstance(expr, ArrayRef):
            info = self._lookup(expr.name, expr.pos)
            if info is None:
                return None
            if not info.is_array:
                self._error_pos(
                    expr.pos,
                    f"'{expr.name}' is not an array and cannot be indexed",
                    f"Use just {expr.name} without parentheses",
                )
                return None
            self._check_index(expr)
            return info.scalar_type
        if isinstance(expr, InputBoxCall):
            self.infer(expr.prompt)
            return ScalarType.STRING
        if isinstance(expr, Negate):
            operand = self.infer(expr.operand)
            if operand is ScalarType.STRING:
                self._error_at(
                    expr.operand,
                    "'-' needs a number",
                    "Apply '-' to an Integer value",
                )
                return None
            return None if operand is None else ScalarType.INTEGER
        if isinstance(expr, BinaryOp):
            return self._infer_binary(expr)
        raise TypeError(f"not an expression: {expr!r}")

    def _infer_binary(self, expr: BinaryOp) -> ScalarType | None:
        if expr.op in COMPARISON_OPS:
            self._error_at(
                expr,
                f"a comparison like '{expr.op}' can only be the condition "
                "of an If line",
                "Move the comparison into its own If ... Then line",
            )
            self.infer(expr.left)
            self.infer(expr.right)
            return None
        left = self.infer(expr.left)
        right = self.infer(expr.right)
        if expr.op == "+":
            if left is None or right is None:
                return None
            if left is ScalarType.INTEGER and right is ScalarType.INTEGER:
                return ScalarType.INTEGER
            return ScalarType.STRING  # joining text converts numbers to text
        for side, side_type in ((expr.left, left), (expr.right, right)):
            if side_type is ScalarType.STRING:
                self._error_at(
                    side,
                    f"'{expr.op}' needs Integer values on both sides",
                    "Only numbers work here; use + to join text",
                )
                return None
        if left is None or right is None:
            return None
        return ScalarType.INTEGER

    def _check_index(self, ref: ArrayRef) -> None:
        if self.infer(ref.index) is ScalarType.STRING:
            self._error_at(
                ref.index,
                "an array index must be an Integer",
                f"Use a whole number, e.g. {ref.name}(0)",
            )

    def _lookup(self, name: str, pos: tuple[int, int]) -> SymbolInfo | None:
        info = self.symbols.get(name.lower())
        if info is None or info.decl_line > self.line:
            self._error_pos(
                pos,
                f"'{name}' is used before it is declared",
                f"Declare it first, e.g. Dim {name} As Integer",
            )
            return None
        return info

    def _error_at(self, expr: Expr, message: str, suggestion: str) -> None:
        self._error_pos(expr.pos, message, suggestion)

    def _error_pos(self, pos: tuple[int, int], message: str, suggestion: str) -> None:
        self.diags.append(error(pos[0], pos[1], message, suggestion))


def _target_text(target: VarRef | ArrayRef) -> str:
    if isinstance(target, ArrayRef):
        from .nodes import render_expr

        return f"{target.name}({render_expr(target.index)})"
    return target.name
