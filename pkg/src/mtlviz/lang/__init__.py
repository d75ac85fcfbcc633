"""Language core: source handling, parser, and static checker."""

from .checker import (
    CheckResult,
    CheckedProgram,
    IfBlock,
    MAX_ARRAY_BOUND,
    SymbolInfo,
    check,
)
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
    INT_MAX,
    INT_MIN,
    InputBoxCall,
    IntLiteral,
    Negate,
    NextStmt,
    Output,
    Pos,
    ScalarType,
    Severity,
    SourceProgram,
    Statement,
    StringLiteral,
    VarRef,
    render_expr,
    render_statement,
)
from .parser import ParseResult, parse, parse_expression
from .tokens import Token, TokenKind, tokenize


def analyze(source: SourceProgram) -> tuple[CheckedProgram | None, tuple[Diagnostic, ...]]:
    """Parse and check a program, collecting diagnostics from both stages."""
    parsed = parse(source)
    if parsed.diagnostics:
        return None, parsed.diagnostics
    result = check(parsed.statements)
    return result.program, result.diagnostics


def analyze_text(text: str) -> tuple[CheckedProgram | None, tuple[Diagnostic, ...]]:
    return analyze(SourceProgram.from_text(text))


__all__ = [
    "ArrayRef", "Assign", "BinaryOp", "COMPARISON_OPS", "CheckResult",
    "CheckedProgram", "DeclareArray", "DeclareScalar", "Diagnostic",
    "ElseMarker", "EndIfMarker", "Expr", "ForHeader", "IfBlock", "IfHeader",
    "INT_MAX", "INT_MIN", "InputBoxCall", "IntLiteral", "MAX_ARRAY_BOUND",
    "Negate", "NextStmt", "Output", "ParseResult", "Pos", "ScalarType",
    "Severity", "SourceProgram", "Statement", "StringLiteral", "SymbolInfo",
    "Token", "TokenKind", "VarRef", "analyze", "analyze_text", "check",
    "parse", "parse_expression", "render_expr", "render_statement",
    "tokenize",
]
