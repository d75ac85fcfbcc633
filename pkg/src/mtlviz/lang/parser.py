"""Recursive-descent parser: one statement per source line.

Parsing is total: every failure becomes a Diagnostic with a suggestion, and
the parser moves on to the next line so a program reports all of its broken
lines at once.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    Negate,
    NextStmt,
    Output,
    ScalarType,
    SourceProgram,
    Statement,
    StringLiteral,
    VarRef,
    error,
)
from .tokens import (
    KEYWORD_DISPLAY,
    Token,
    TokenKind,
    is_blank_line,
    is_comment_line,
    tokenize,
)


@dataclass(frozen=True)
class ParseResult:
    statements: tuple[Statement, ...]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def parse(source: SourceProgram) -> ParseResult:
    statements: list[Statement] = []
    diagnostics: list[Diagnostic] = []
    for line, text in source.lines:
        if is_blank_line(text) or is_comment_line(text):
            continue
        tokens, lex_error = tokenize(text, line)
        if lex_error is not None:
            diagnostics.append(lex_error)
            continue
        try:
            statements.append(_LineParser(tokens, line, text).parse_statement())
        except _ParseError as exc:
            diagnostics.append(exc.diagnostic)
    return ParseResult(tuple(statements), tuple(diagnostics))


def parse_expression(text: str) -> Expr:
    """Parse a standalone expression; raises ValueError with the message."""
    tokens, lex_error = tokenize(text, 1)
    if lex_error is not None:
        raise ValueError(lex_error.message)
    parser = _LineParser(tokens, 1, text)
    try:
        expr = parser.parse_expr()
        parser.expect_eol()
    except _ParseError as exc:
        raise ValueError(exc.diagnostic.message) from None
    return expr


class _ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class _LineParser:
    def __init__(self, tokens: list[Token], line: int, text: str):
        self.tokens = tokens
        self.line = line
        self.text = text
        self.pos = 0

    # -- token plumbing --

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOL:
            self.pos += 1
        return token

    def fail(self, message: str, suggestion: str, token: Token | None = None):
        token = token or self.peek()
        raise _ParseError(error(self.line, token.col, message, suggestion))

    def expect_eol(self) -> None:
        if self.peek().kind is not TokenKind.EOL:
            self.fail(
                "unexpected text after the statement",
                "Write one statement per line",
            )

    def _describe(self, token: Token) -> str:
        if token.kind is TokenKind.EOL:
            return "the end of the line"
        return f"'{token.text}'"

    # -- statements --

    def parse_statement(self) -> Statement:
        token = self.peek()
        meta = {"line": self.line, "col": token.col, "text": self.text}
        if token.kind is TokenKind.KEYWORD:
            handler = {
                "dim": self._parse_dim,
                "for": self._parse_for,
                "next": self._parse_next,
                "if": self._parse_if,
                "else": self._parse_else,
                "end": self._parse_end_if,
                "msgbox": self._parse_msgbox,
            }.get(token.norm)
            if handler is not None:
                return handler(meta)
            if token.norm == "inputbox":
                self.fail(
                    "InputBox can only appear on the right-hand side of '='",
                    'Write e.g. num(0) = InputBox("Input number")',
                )
            self.fail(
                f"a statement cannot start with '{token.text}'",
                "Start the line with Dim, a variable name, For, Next, "
                "If, Else, End If or MsgBox",
            )
        if token.kind is TokenKind.IDENT:
            return self._parse_assignment(meta)
        if token.kind is TokenKind.INT:
            self.fail(
                "a statement cannot start with a number",
                "Remove the leading line number; lines are numbered automatically",
            )
        self.fail(
            f"a statement cannot start with {self._describe(token)}",
            "Start the line with Dim, a variable name, For, Next, "
            "If, Else, End If or MsgBox",
        )
        raise AssertionError("unreachable")

    def _expect_name(self, what: str, example: str) -> Token:
        token = self.peek()
        if token.kind is TokenKind.IDENT:
            return self.advance()
        if token.kind is TokenKind.KEYWORD:
            display = KEYWORD_DISPLAY[token.norm]
            self.fail(
                f"'{display}' is a keyword and cannot be used as {what}",
                f"Pick a different name, e.g. {example}",
            )
        self.fail(f"expected {what}", f"Write e.g. {example}")
        raise AssertionError("unreachable")

    def _parse_type(self) -> ScalarType:
        token = self.peek()
        if token.is_kw("integer"):
            self.advance()
            return ScalarType.INTEGER
        if token.is_kw("string"):
            self.advance()
            return ScalarType.STRING
        self.fail(
            "expected a type after 'As'",
            "Write Integer or String, e.g. Dim sum As Integer",
        )
        raise AssertionError("unreachable")

    def _parse_dim(self, meta) -> Statement:
        self.advance()
        name = self._expect_name("a variable name after 'Dim'", "Dim sum As Integer")
        bound: Expr | None = None
        if self.peek().kind is TokenKind.LPAREN:
            self.advance()
            bound = self.parse_expr()
            if self.peek().kind is not TokenKind.RPAREN:
                self.fail(
                    "expected ')' after the array size",
                    "Close the parenthesis, e.g. Dim num(1) As Integer",
                )
            self.advance()
        if not self.peek().is_kw("as"):
            self.fail(
                f"expected 'As' after '{name.text}'",
                f"Write e.g. Dim {name.text} As Integer",
            )
        self.advance()
        scalar_type = self._parse_type()
        self.expect_eol()
        if bound is None:
            return DeclareScalar(name.text, scalar_type, **meta)
        return DeclareArray(name.text, bound, scalar_type, **meta)

    def _parse_for(self, meta) -> Statement:
        self.advance()
        counter = self._expect_name(
            "a counter name after 'For'", "For i As Integer = 0 To 1"
        )
        if self.peek().is_kw("as"):
            self.advance()
            token = self.peek()
            if not token.is_kw("integer"):
                self.fail(
                    "a loop counter must be an Integer",
                    "Write For i As Integer = 0 To 1",
                )
            self.advance()
        if not (self.peek().kind is TokenKind.OP and self.peek().norm == "="):
            self.fail(
                f"expected '=' after the counter '{counter.text}'",
                f"Write For {counter.text} As Integer = 0 To 1",
            )
        self.advance()
        start = self.parse_expr()
        if not self.peek().is_kw("to"):
            self.fail(
                "expected 'To' after the start value",
                f"Write For {counter.text} As Integer = 0 To 1",
            )
        self.advance()
        end = self.parse_expr()
        step: Expr | None = None
        if self.peek().is_kw("step"):
            self.advance()
            step = self.parse_expr()
        self.expect_eol()
        return ForHeader(counter.text, start, end, step, **meta)

    def _parse_next(self, meta) -> Statement:
        self.advance()
        counter: str | None = None
        if self.peek().kind is TokenKind.IDENT:
            counter = self.advance().text
        self.expect_eol()
        return NextStmt(counter, **meta)

    def _parse_if(self, meta) -> Statement:
        self.advance()
        condition = self.parse_expr()
        if not self.peek().is_kw("then"):
            self.fail(
                "expected 'Then' at the end of the If line",
                "Write e.g. If x > 0 Then",
            )
        self.advance()
        if self.peek().kind is not TokenKind.EOL:
            self.fail(
                "nothing may follow 'Then' on the same line",
                "Put the statements of the If body on the lines below",
            )
        return IfHeader(condition, **meta)

    def _parse_else(self, meta) -> Statement:
        self.advance()
        self.expect_eol()
        return ElseMarker(**meta)

    def _parse_end_if(self, meta) -> Statement:
        self.advance()
        if not self.peek().is_kw("if"):
            self.fail("expected 'If' after 'End'", "Write End If")
        self.advance()
        self.expect_eol()
        return EndIfMarker(**meta)

    def _parse_msgbox(self, meta) -> Statement:
        self.advance()
        if self.peek().kind is not TokenKind.LPAREN:
            self.fail(
                "expected '(' after MsgBox",
                'Write MsgBox("your message")',
            )
        self.advance()
        value = self.parse_expr()
        if self.peek().kind is not TokenKind.RPAREN:
            self.fail(
                "expected ')' to close MsgBox",
                'Write MsgBox("your message")',
            )
        self.advance()
        self.expect_eol()
        return Output(value, **meta)

    def _parse_assignment(self, meta) -> Statement:
        name = self.advance()
        target: VarRef | ArrayRef
        if self.peek().kind is TokenKind.LPAREN:
            self.advance()
            index = self.parse_expr()
            if self.peek().kind is not TokenKind.RPAREN:
                self.fail(
                    "expected ')' after the array index",
                    f"Write e.g. {name.text}(0) = 5",
                )
            self.advance()
            target = ArrayRef(name.text, index, pos=(self.line, name.col))
        else:
            target = VarRef(name.text, pos=(self.line, name.col))
        token = self.peek()
        if not (token.kind is TokenKind.OP and token.norm == "="):
            self.fail(
                f"expected '=' after '{name.text}'",
                f"Write {name.text} = <value>, or start the line with a "
                "keyword such as Dim",
            )
        self.advance()
        value = self.parse_expr()
        self.expect_eol()
        return Assign(target, value, **meta)

    # -- expressions --

    def parse_expr(self) -> Expr:
        left = self._parse_additive()
        token = self.peek()
        if token.kind is TokenKind.OP and token.norm in COMPARISON_OPS:
            self.advance()
            right = self._parse_additive()
            return BinaryOp(token.norm, left, right, pos=(self.line, token.col))
        return left

    def _parse_additive(self) -> Expr:
        left = self._parse_term()
        while True:
            token = self.peek()
            if token.kind is TokenKind.OP and token.norm in ("+", "-"):
                self.advance()
                right = self._parse_term()
                left = BinaryOp(token.norm, left, right, pos=(self.line, token.col))
            else:
                return left

    def _parse_term(self) -> Expr:
        left = self._parse_unary()
        while True:
            token = self.peek()
            if (token.kind is TokenKind.OP and token.norm in ("*", "\\")) or \
                    token.is_kw("mod"):
                self.advance()
                right = self._parse_unary()
                op = "Mod" if token.norm == "mod" else token.norm
                left = BinaryOp(op, left, right, pos=(self.line, token.col))
            else:
                return left

    def _parse_unary(self) -> Expr:
        token = self.peek()
        if token.kind is TokenKind.OP and token.norm == "-":
            self.advance()
            return Negate(self._parse_unary(), pos=(self.line, token.col))
        return self._parse_atom()

    def _parse_atom(self) -> Expr:
        token = self.peek()
        if token.kind is TokenKind.INT:
            self.advance()
            return IntLiteral(int(token.text), pos=(self.line, token.col))
        if token.kind is TokenKind.STRING:
            self.advance()
            return StringLiteral(token.norm, pos=(self.line, token.col))
        if token.is_kw("inputbox"):
            self.advance()
            if self.peek().kind is not TokenKind.LPAREN:
                self.fail(
                    "expected '(' after InputBox",
                    'Write InputBox("your prompt")',
                )
            self.advance()
            prompt = self.parse_expr()
            if self.peek().kind is not TokenKind.RPAREN:
                self.fail(
                    "expected ')' to close InputBox",
                    'Write InputBox("your prompt")',
                )
            self.advance()
            return InputBoxCall(prompt, pos=(self.line, token.col))
        if token.kind is TokenKind.IDENT:
            self.advance()
            if self.peek().kind is TokenKind.LPAREN:
                self.advance()
                index = self.parse_expr()
                if self.peek().kind is not TokenKind.RPAREN:
                    self.fail(
                        "expected ')' after the array index",
                        f"Write e.g. {token.text}(0)",
                    )
                self.advance()
                return ArrayRef(token.text, index, pos=(self.line, token.col))
            return VarRef(token.text, pos=(self.line, token.col))
        if token.kind is TokenKind.LPAREN:
            self.advance()
            inner = self.parse_expr()
            if self.peek().kind is not TokenKind.RPAREN:
                self.fail("expected ')'", "Close the parenthesis")
            self.advance()
            return inner
        self.fail(
            f"expected a value, found {self._describe(token)}",
            "Use a number, a variable name, quoted text or InputBox(...)",
        )
        raise AssertionError("unreachable")
