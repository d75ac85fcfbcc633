"""Statement templates for building programs from a form-style UI.

Every kind fills a fixed template from string parameters and validates the
result by actually parsing it, so a snippet that comes back without an
error is guaranteed to be insertable as-is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .lang.nodes import SourceProgram
from .lang.parser import parse
from .lang.tokens import KEYWORDS

SNIPPET_KINDS = (
    "declaration",
    "assignment",
    "data_input",
    "data_output",
    "condition",
    "looping",
    "insert_text",
)


class SnippetError(Exception):
    """A bad snippet request, with the same friendly shape as a Diagnostic."""

    def __init__(self, message: str, suggestion: str):
        super().__init__(message)
        self.message = message
        self.suggestion = suggestion


@dataclass(frozen=True)
class Snippet:
    lines: tuple[str, ...]
    cursor_hint: tuple[int, int]  # (offset into lines, 1-based column)


def generate_snippet(kind: str, params: Mapping[str, str]) -> Snippet:
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise SnippetError(
            f"unknown snippet kind '{kind}'",
            "Use one of: " + ", ".join(SNIPPET_KINDS),
        ) from None
    return builder(_Params(kind, params))


@dataclass(frozen=True)
class _Params:
    kind: str
    values: Mapping[str, str]

    def get(self, key: str, example: str) -> str:
        try:
            value = self.values[key]
        except KeyError:
            raise SnippetError(
                f"missing parameter '{key}' for the {self.kind} snippet",
                f"Provide '{key}', e.g. {example}",
            ) from None
        if not isinstance(value, str):
            raise SnippetError(
                f"parameter '{key}' must be a string",
                f"Send '{key}' as text, e.g. {example}",
            )
        return value

    def get_optional(self, key: str) -> str | None:
        value = self.values.get(key)
        if value is not None and not isinstance(value, str):
            raise SnippetError(
                f"parameter '{key}' must be a string",
                f"Send '{key}' as text",
            )
        return value

    def reject_unknown(self, allowed: tuple[str, ...]) -> None:
        for key in self.values:
            if key not in allowed:
                raise SnippetError(
                    f"unknown parameter '{key}' for the {self.kind} snippet",
                    "Valid parameters: " + ", ".join(allowed),
                )


def _require_identifier(name: str, what: str) -> str:
    candidate = name.strip()
    ok = (
        candidate
        and ("a" <= candidate[0] <= "z" or "A" <= candidate[0] <= "Z")
        and all(
            "a" <= ch <= "z" or "A" <= ch <= "Z" or "0" <= ch <= "9" or ch == "_"
            for ch in candidate
        )
    )
    if not ok:
        raise SnippetError(
            f"'{name}' is not a valid {what}",
            "Names start with a letter and use only letters, digits and _",
        )
    if candidate.lower() in KEYWORDS:
        raise SnippetError(
            f"'{candidate}' is a keyword and cannot be used as a {what}",
            "Pick a different name, e.g. total",
        )
    return candidate


def _validate_line(line: str) -> str:
    """Parse the assembled line; surface the first problem as a SnippetError."""
    result = parse(SourceProgram.from_text(line))
    if result.diagnostics:
        first = result.diagnostics[0]
        raise SnippetError(first.message, first.suggestion)
    return line


def _end_of(line: str) -> tuple[int, int]:
    return (0, len(line) + 1)


def _declaration(params: _Params) -> Snippet:
    params.reject_unknown(("name", "type", "size"))
    name = _require_identifier(params.get("name", "name=sum"), "variable name")
    type_text = params.get("type", "type=Integer").strip().lower()
    if type_text not in ("integer", "string"):
        raise SnippetError(
            f"'{params.values['type']}' is not a type",
            "Use Integer or String",
        )
    type_name = "Integer" if type_text == "integer" else "String"
    size = params.get_optional("size")
    if size is None:
        line = f"Dim {name} As {type_name}"
    else:
        digits = size.strip()
        if not (digits and all("0" <= ch <= "9" for ch in digits)):
            raise SnippetError(
                f"'{size}' is not a valid array size",
                "Use a whole number of 0 or more, e.g. size=1",
            )
        line = f"Dim {name}({digits}) As {type_name}"
    _validate_line(line)
    return Snippet((line,), _end_of(line))


def _assignment(params: _Params) -> Snippet:
    params.reject_unknown(("target", "expr"))
    target = params.get("target", "target=sum").strip()
    expr = params.get("expr", "expr=0").strip()
    line = _validate_line(f"{target} = {expr}")
    return Snippet((line,), _end_of(line))


def _data_input(params: _Params) -> Snippet:
    params.reject_unknown(("target", "prompt"))
    target = params.get("target", "target=num(0)").strip()
    prompt = params.get("prompt", "prompt=Input number")
    if '"' in prompt:
        raise SnippetError(
            "the prompt cannot contain a double quote",
            "Remove the \" characters from the prompt",
        )
    line = _validate_line(f'{target} = InputBox("{prompt}")')
    return Snippet((line,), _end_of(line))


def _data_output(params: _Params) -> Snippet:
    params.reject_unknown(("expr",))
    expr = params.get("expr", 'expr="The sum is" + sum').strip()
    line = _validate_line(f"MsgBox({expr})")
    return Snippet((line,), _end_of(line))


def _condition(params: _Params) -> Snippet:
    params.reject_unknown(("condition",))
    condition = params.get("condition", "condition=x > 0").strip()
    header = _validate_line(f"If {condition} Then")
    return Snippet((header, "Else", "End If"), (1, 1))


def _looping(params: _Params) -> Snippet:
    params.reject_unknown(("counter", "from", "to", "step"))
    counter = _require_identifier(
        params.get("counter", "counter=i"), "loop counter"
    )
    start = params.get("from", "from=0").strip()
    end = params.get("to", "to=1").strip()
    step = params.get_optional("step")
    header = f"For {counter} As Integer = {start} To {end}"
    if step is not None:
        header += f" Step {step.strip()}"
    _validate_line(header)
    return Snippet((header, "Next"), (1, 1))


def _insert_text(params: _Params) -> Snippet:
    params.reject_unknown(("text",))
    text = params.get("text", "text=sum = 0")
    normalized = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = tuple(normalized.split("\n"))
    return Snippet(lines, (len(lines) - 1, len(lines[-1]) + 1))


_BUILDERS = {
    "declaration": _declaration,
    "assignment": _assignment,
    "data_input": _data_input,
    "data_output": _data_output,
    "condition": _condition,
    "looping": _looping,
    "insert_text": _insert_text,
}
