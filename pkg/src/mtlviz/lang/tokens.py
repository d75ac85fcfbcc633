"""Line lexer: keywords are case-insensitive, comments start the line."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .nodes import INT_MAX, Diagnostic, error


class TokenKind(enum.Enum):
    IDENT = "identifier"
    KEYWORD = "keyword"
    INT = "integer literal"
    STRING = "string literal"
    OP = "operator"
    LPAREN = "'('"
    RPAREN = "')'"
    EOL = "end of line"


KEYWORDS = frozenset({
    "dim", "as", "integer", "string", "for", "to", "step", "next",
    "if", "then", "else", "end", "inputbox", "msgbox", "mod",
})

# Canonical spellings used in messages and canonical rendering.
KEYWORD_DISPLAY = {
    "dim": "Dim", "as": "As", "integer": "Integer", "string": "String",
    "for": "For", "to": "To", "step": "Step", "next": "Next",
    "if": "If", "then": "Then", "else": "Else", "end": "End",
    "inputbox": "InputBox", "msgbox": "MsgBox", "mod": "Mod",
}

_TWO_CHAR_OPS = ("<>", "<=", ">=")
_ONE_CHAR_OPS = "+-*\\=<>"


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _is_letter(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str  # exact source spelling
    norm: str  # lowercased for words, symbol for operators
    line: int
    col: int

    def is_kw(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.norm == word


def is_comment_line(text: str) -> bool:
    return text.lstrip().startswith("'")


def is_blank_line(text: str) -> bool:
    return not text.strip()


def tokenize(text: str, line: int) -> tuple[list[Token], Diagnostic | None]:
    """Lex one source line.

    Always returns the tokens scanned so far; a lexical problem is reported
    as a Diagnostic and scanning stops there. The token list ends with an
    EOL token when scanning completes.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i + 1
        if ch in " \t":
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                return tokens, error(
                    line, col,
                    "this quoted text never closes",
                    'Add a closing double quote, e.g. "hello"',
                )
            value = text[i + 1:end]
            tokens.append(Token(TokenKind.STRING, text[i:end + 1], value, line, col))
            i = end + 1
            continue
        if _is_digit(ch):
            j = i
            while j < n and _is_digit(text[j]):
                j += 1
            digits = text[i:j]
            if int(digits) > INT_MAX:
                return tokens, error(
                    line, col,
                    f"the number {digits} is too large for an Integer",
                    f"Keep whole numbers at or below {INT_MAX}",
                )
            tokens.append(Token(TokenKind.INT, digits, digits, line, col))
            i = j
            continue
        if _is_letter(ch):
            j = i
            while j < n and (_is_letter(text[j]) or _is_digit(text[j]) or text[j] == "_"):
                j += 1
            word = text[i:j]
            norm = word.lower()
            kind = TokenKind.KEYWORD if norm in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, word, norm, line, col))
            i = j
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token(TokenKind.OP, two, two, line, col))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token(TokenKind.OP, ch, ch, line, col))
            i += 1
            continue
        if ch == "(":
            tokens.append(Token(TokenKind.LPAREN, ch, ch, line, col))
            i += 1
            continue
        if ch == ")":
            tokens.append(Token(TokenKind.RPAREN, ch, ch, line, col))
            i += 1
            continue
        if ch == "'":
            return tokens, error(
                line, col,
                "a comment must be on its own line",
                "Start the comment line with ' or remove the apostrophe",
            )
        return tokens, error(
            line, col,
            f"unexpected character {ch!r}",
            "Statements use names, numbers, quoted text, parentheses "
            "and the operators + - * \\ Mod = <> < <= > >=",
        )
    tokens.append(Token(TokenKind.EOL, "", "", line, n + 1))
    return tokens, None
