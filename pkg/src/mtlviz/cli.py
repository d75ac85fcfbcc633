"""Command-line entry points: check, run, step, snippet, serve.

Exit codes: 0 success, 1 program diagnostics, 2 usage or environment
problems, 3 runtime fault or truncation, 4 ran out of input. Every nonzero
exit writes at least one line to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .lang import SourceProgram, analyze
from .machine import (
    AwaitingInput,
    ExecutionMode,
    Fault,
    Faulted,
    Finished,
    STEP_CAP_DEFAULT,
    Status,
    Trace,
    TraceStep,
    Truncated,
    new_session,
    snapshot_at,
)
from .render import (
    render_ram_text,
    render_step_text,
    render_trace_json,
    three_block_view,
)
from .snippets import SnippetError, generate_snippet

STEP_CAP_ENV = "MTLVIZ_STEP_CAP"


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _Exit as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtlviz",
        description="Run small BASIC-flavored programs line by line and "
        "watch their RAM diagrams.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="parse and check a program")
    check.add_argument("file")
    check.set_defaults(handler=_cmd_check)

    run = commands.add_parser("run", help="run a program to the end")
    run.add_argument("file")
    run.add_argument(
        "--input",
        action="append",
        default=[],
        metavar="VALUE",
        help="queue one input value (repeatable, in order)",
    )
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--step-cap", type=_positive_int, default=None)
    run.add_argument(
        "--delay-ms",
        type=_non_negative_int,
        default=0,
        help="pause between printed steps (text format only)",
    )
    run.add_argument(
        "--color",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="highlight the executed line (default: only on a terminal)",
    )
    run.set_defaults(handler=_cmd_run)

    step = commands.add_parser("step", help="execute interactively, one line at a time")
    step.add_argument("file")
    step.add_argument("--step-cap", type=_positive_int, default=None)
    step.add_argument(
        "--color", action=argparse.BooleanOptionalAction, default=None
    )
    step.set_defaults(handler=_cmd_step)

    snippet = commands.add_parser("snippet", help="print a statement template")
    snippet.add_argument("kind")
    snippet.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="fill one template parameter (repeatable)",
    )
    snippet.set_defaults(handler=_cmd_snippet)

    serve = commands.add_parser("serve", help="serve the session API over HTTP")
    serve.add_argument("--port", type=int, default=8640)
    serve.add_argument(
        "--allow-origin",
        default=None,
        help="send CORS headers for this origin ('*' allows any)",
    )
    serve.add_argument(
        "--persist-dir",
        default=None,
        help="write each finished session's trace JSON into this directory",
    )
    serve.add_argument(
        "--session-ttl",
        type=_positive_int,
        default=1800,
        metavar="SECONDS",
        help="drop idle sessions after this long (default 1800)",
    )
    serve.add_argument("--step-cap", type=_positive_int, default=None)
    serve.set_defaults(handler=_cmd_serve)
    return parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be 0 or more")
    return value


def _load_source(path: str) -> SourceProgram:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise _Exit(2, f"error: no such file: {path}") from None
    except IsADirectoryError:
        raise _Exit(2, f"error: {path} is a directory") from None
    except PermissionError:
        raise _Exit(2, f"error: cannot read {path}: permission denied") from None
    except UnicodeDecodeError:
        raise _Exit(2, f"error: {path} is not valid UTF-8 text") from None
    except OSError as exc:
        raise _Exit(2, f"error: cannot read {path}: {exc}") from None
    return SourceProgram.from_text(raw)


def _analyze_or_exit(source: SourceProgram):
    program, diagnostics = analyze(source)
    if program is None:
        raise _Exit(1, "\n".join(str(d) for d in diagnostics))
    return program


def _resolve_step_cap(args) -> int:
    if args.step_cap is not None:
        return args.step_cap
    env = os.environ.get(STEP_CAP_ENV)
    if env is None:
        return STEP_CAP_DEFAULT
    try:
        value = int(env)
        if value < 1:
            raise ValueError
    except ValueError:
        raise _Exit(
            2, f"error: {STEP_CAP_ENV} must be a positive whole number, got {env!r}"
        ) from None
    return value


def _use_color(flag: bool | None) -> bool:
    if flag is not None:
        return flag
    return sys.stdout.isatty()


def _fault_line(fault: Fault) -> str:
    return (
        f"line {fault.line}: {fault.kind.value}: {fault.message} "
        f"(hint: {fault.suggestion})"
    )


def _cmd_check(args) -> int:
    _analyze_or_exit(_load_source(args.file))
    return 0


def _finish_code(trace: Trace) -> int:
    if trace.status in (Status.FAULTED, Status.TRUNCATED):
        assert trace.fault is not None
        print(_fault_line(trace.fault), file=sys.stderr)
        return 3
    return 0


def _cmd_run(args) -> int:
    source = _load_source(args.file)
    program = _analyze_or_exit(source)
    session = new_session(
        program,
        mode=ExecutionMode.COMPLETE_RUN,
        initial_inputs=tuple(args.input),
        step_cap=_resolve_step_cap(args),
    )
    trace = session.run_to_end()
    if args.format == "json":
        print(render_trace_json(trace))
    else:
        color = _use_color(args.color)
        for step in trace.steps:
            print(render_step_text(step, source, color=color))
            if args.delay_ms and step.index < len(trace.steps) - 1:
                time.sleep(args.delay_ms / 1000.0)
        final = trace.steps[-1].ram_after if trace.steps else ()
        print(render_ram_text(three_block_view(final)), end="")
        if trace.outputs:
            print()
            print("Output:")
            for text in trace.outputs:
                print(f"  {text}")
    if trace.status is Status.AWAITING_INPUT:
        prompt = session.pending_prompt or ""
        print(
            f'error: the program asked for input ("{prompt}") but none was left; '
            "pass more --input values",
            file=sys.stderr,
        )
        return 4
    return _finish_code(trace)


def _cmd_step(args) -> int:
    source = _load_source(args.file)
    program = _analyze_or_exit(source)
    session = new_session(
        program,
        mode=ExecutionMode.LINE_BY_LINE,
        step_cap=_resolve_step_cap(args),
    )
    color = _use_color(args.color)
    print(render_ram_text(three_block_view(())), end="")
    print()
    print("Enter = run next line, r K = RAM after step K, q = quit")
    while True:
        try:
            command = input("> ").strip()
        except EOFError:
            if session.status is Status.AWAITING_INPUT:
                print("error: ran out of input while the program was asking "
                      "for a value", file=sys.stderr)
                return 4
            return 0
        if command == "q":
            return 0
        if command.startswith("r"):
            rest = command[1:].strip()
            try:
                k = int(rest)
                snapshot = snapshot_at(session.trace(), k)
            except (ValueError, IndexError):
                top = session.step_count - 1
                print(f"usage: r K where K is -1 through {top}")
                continue
            print(render_ram_text(three_block_view(snapshot)), end="")
            continue
        if command:
            print("commands: Enter = step, r K = RAM after step K, q = quit")
            continue
        outcome = session.step()
        if isinstance(outcome, AwaitingInput):
            try:
                raw = input(f"{outcome.prompt}: ")
            except EOFError:
                print("error: ran out of input while the program was asking "
                      "for a value", file=sys.stderr)
                return 4
            session.provide_input(raw)
            outcome = session.step()
        if isinstance(outcome, TraceStep):
            print(render_step_text(outcome, source, color=color))
            print(render_ram_text(three_block_view(outcome.ram_after)), end="")
        elif isinstance(outcome, Finished):
            trace = session.trace()
            if trace.outputs:
                print("Output:")
                for text in trace.outputs:
                    print(f"  {text}")
            print("Program finished.")
            return 0
        elif isinstance(outcome, (Faulted, Truncated)):
            print(_fault_line(outcome.fault), file=sys.stderr)
            return 3


def _cmd_snippet(args) -> int:
    params: dict[str, str] = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise _Exit(2, f"error: --param needs KEY=VALUE, got {item!r}")
        params[key] = value
    try:
        snippet = generate_snippet(args.kind, params)
    except SnippetError as exc:
        print(f"error: {exc.message} (hint: {exc.suggestion})", file=sys.stderr)
        return 1
    for line in snippet.lines:
        print(line)
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, create_server

    if not 1 <= args.port <= 65535:
        raise _Exit(2, f"error: port must be 1-65535, got {args.port}")
    config = ServiceConfig(
        step_cap=_resolve_step_cap(args),
        session_ttl=float(args.session_ttl),
        allow_origin=args.allow_origin,
        persist_dir=args.persist_dir,
    )
    if config.persist_dir:
        try:
            Path(config.persist_dir).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise _Exit(2, f"error: cannot create {config.persist_dir}: {exc}") from None
    try:
        server = create_server(args.port, config)
    except OSError as exc:
        raise _Exit(2, f"error: cannot listen on port {args.port}: {exc}") from None
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
