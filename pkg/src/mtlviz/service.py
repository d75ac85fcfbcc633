"""HTTP session API over the interpreter, on the standard library server.

Sessions live in memory, keyed by a random id. Each session has its own
lock so concurrent requests against one session serialize instead of
interleaving; idle sessions are dropped after a TTL.
"""

from __future__ import annotations

import json
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any

from .lang import analyze_text
from .machine import (
    AwaitingInput,
    ExecutionMode,
    Faulted,
    Finished,
    STEP_CAP_DEFAULT,
    Session,
    Status,
    TraceStep,
    Truncated,
    new_session,
    snapshot_at,
)
from .render import (
    dumps_canonical,
    fault_to_obj,
    ram_cell_to_obj,
    render_trace_json,
    step_to_obj,
    trace_to_obj,
    three_block_view,
)
from .snippets import SnippetError, generate_snippet

MAX_BODY_BYTES = 1_000_000


@dataclass(frozen=True)
class ServiceConfig:
    step_cap: int = STEP_CAP_DEFAULT
    session_ttl: float = 1800.0
    allow_origin: str | None = None
    persist_dir: str | None = None


@dataclass
class SessionRecord:
    id: str
    session: Session
    created_at: float
    last_touched: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    persisted: bool = False


class SessionStore:
    """Thread-safe in-memory session table with idle expiry."""

    def __init__(self, ttl: float, clock=time.monotonic):
        self._ttl = ttl
        self._clock = clock
        self._records: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()

    def create(self, session: Session) -> SessionRecord:
        now = self._clock()
        record = SessionRecord(secrets.token_hex(8), session, now, now)
        with self._lock:
            self._sweep(now)
            self._records[record.id] = record
        return record

    def get(self, session_id: str) -> SessionRecord | None:
        now = self._clock()
        with self._lock:
            self._sweep(now)
            record = self._records.get(session_id)
            if record is not None:
                record.last_touched = now
            return record

    def _sweep(self, now: float) -> None:
        expired = [
            key
            for key, record in self._records.items()
            if now - record.last_touched > self._ttl
        ]
        for key in expired:
            del self._records[key]

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)


class _HttpError(Exception):
    def __init__(self, status: int, code: str, message: str, suggestion: str):
        super().__init__(message)
        self.status = status
        self.body = {"code": code, "message": message, "suggestion": suggestion}


class VisualizerServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], config: ServiceConfig):
        super().__init__(address, _Handler)
        self.config = config
        self.store = SessionStore(config.session_ttl)


def create_server(
    port: int, config: ServiceConfig | None = None, host: str = "127.0.0.1"
) -> VisualizerServer:
    return VisualizerServer((host, port), config or ServiceConfig())


_SESSION_ACTION = re.compile(r"^/sessions/([0-9a-f]+)/(step|input|run|trace)$")
_SESSION_SNAPSHOT = re.compile(r"^/sessions/([0-9a-f]+)/snapshot/(-?\d+)$")


class _Handler(BaseHTTPRequestHandler):
    server: VisualizerServer
    protocol_version = "HTTP/1.1"
    _request_body: bytes = b""

    # -- plumbing --

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        origin = self.server.config.allow_origin
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            if origin != "*":
                self.send_header("Vary", "Origin")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, obj: Any) -> None:
        self._send(
            status,
            (dumps_canonical(obj) + "\n").encode("utf-8"),
            "application/json; charset=utf-8",
        )

    def _read_body(self) -> bytes:
        # Consume the body before routing; bytes left unread on the socket
        # would desync the next request on a reused keep-alive connection.
        length_header = self.headers.get("Content-Length")
        try:
            length = int(length_header or "0")
        except ValueError:
            self.close_connection = True
            raise _HttpError(
                400, "bad_request", "Content-Length is not a number",
                "Send a JSON body with a correct Content-Length",
            ) from None
        if length > MAX_BODY_BYTES:
            self.close_connection = True
            raise _HttpError(
                413, "too_large", "the request body is too large",
                f"Keep requests under {MAX_BODY_BYTES} bytes",
            )
        return self.rfile.read(length) if length else b""

    def _read_json_object(self) -> dict[str, Any]:
        raw = self._request_body
        if not raw:
            raise _HttpError(
                400, "bad_request", "the request body is empty",
                "Send a JSON object in the request body",
            )
        try:
            obj = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise _HttpError(
                400, "bad_request", "the request body is not valid JSON",
                'Send a JSON object, e.g. {"source":"..."}',
            ) from None
        if not isinstance(obj, dict):
            raise _HttpError(
                400, "bad_request", "the request body must be a JSON object",
                'Send a JSON object, e.g. {"source":"..."}',
            )
        return obj

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        # one line per request on stderr, the default format is fine
        super().log_message(format, *args)

    # -- routing --

    def do_OPTIONS(self) -> None:  # CORS preflight
        self.send_response(204)
        origin = self.server.config.allow_origin
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Max-Age", "600")
            if origin != "*":
                self.send_header("Vary", "Origin")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def _dispatch(self, method: str) -> None:
        try:
            self._request_body = self._read_body() if method == "POST" else b""
            self._route(method)
        except _HttpError as exc:
            self._send_json(exc.status, exc.body)
        except BrokenPipeError:
            pass
        except Exception:  # noqa: BLE001 - a broken handler must not kill the server
            self.log_error("unhandled error on %s %s", method, self.path)
            try:
                self._send_json(
                    500,
                    {
                        "code": "internal_error",
                        "message": "something went wrong on the server",
                        "suggestion": "Check the server log",
                    },
                )
            except OSError:
                pass

    def _route(self, method: str) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/healthz" and method == "GET":
            self._send(200, b"ok", "text/plain; charset=utf-8")
            return
        if path == "/sessions" and method == "POST":
            self._create_session()
            return
        if path == "/snippets" and method == "POST":
            self._post_snippet()
            return
        match = _SESSION_ACTION.match(path)
        if match:
            record = self._record(match.group(1))
            action = match.group(2)
            if action == "step" and method == "POST":
                self._step(record)
                return
            if action == "input" and method == "POST":
                self._input(record)
                return
            if action == "run" and method == "POST":
                self._run(record)
                return
            if action == "trace" and method == "GET":
                self._trace(record)
                return
        match = _SESSION_SNAPSHOT.match(path)
        if match and method == "GET":
            self._snapshot(self._record(match.group(1)), int(match.group(2)))
            return
        raise _HttpError(
            404, "not_found", f"no route for {method} {path}",
            "See the service README for the available endpoints",
        )

    def _record(self, session_id: str) -> SessionRecord:
        record = self.server.store.get(session_id)
        if record is None:
            raise _HttpError(
                404, "unknown_session", f"no session with id '{session_id}'",
                "Create a session with POST /sessions first",
            )
        return record

    # -- handlers --

    def _create_session(self) -> None:
        body = self._read_json_object()
        source = body.get("source")
        if not isinstance(source, str):
            raise _HttpError(
                400, "bad_request", "'source' must be a string",
                'Send {"source":"Dim sum As Integer\\n..."}',
            )
        mode_text = body.get("mode", "line_by_line")
        try:
            mode = ExecutionMode(mode_text)
        except ValueError:
            raise _HttpError(
                400, "bad_request", f"'{mode_text}' is not an execution mode",
                "Use \"line_by_line\" or \"complete_run\"",
            ) from None
        inputs = body.get("inputs", [])
        if not (
            isinstance(inputs, list) and all(isinstance(v, str) for v in inputs)
        ):
            raise _HttpError(
                400, "bad_request", "'inputs' must be a list of strings",
                'Send e.g. {"inputs":["409","91"]}',
            )
        program, diagnostics = analyze_text(source)
        if program is None:
            self._send_json(
                422,
                {
                    "diagnostics": [
                        {
                            "severity": d.severity.value,
                            "line": d.line,
                            "column": d.column,
                            "message": d.message,
                            "suggestion": d.suggestion,
                        }
                        for d in diagnostics
                    ]
                },
            )
            return
        session = new_session(
            program,
            mode=mode,
            initial_inputs=tuple(inputs),
            step_cap=self.server.config.step_cap,
        )
        record = self.server.store.create(session)
        self._send_json(201, {"id": record.id, "status": session.status.value})

    def _step(self, record: SessionRecord) -> None:
        with record.lock:
            session = record.session
            if session.status.is_terminal:
                raise _HttpError(
                    409, "session_over",
                    f"this session is {session.status.value} and cannot step",
                    "Create a new session with POST /sessions",
                )
            outcome = session.step()
            response: dict[str, Any] = {"status": session.status.value}
            if isinstance(outcome, TraceStep):
                response["step"] = step_to_obj(outcome)
            elif isinstance(outcome, AwaitingInput):
                response["prompt"] = outcome.prompt
            elif isinstance(outcome, (Faulted, Truncated)):
                response["fault"] = fault_to_obj(outcome.fault)
            else:
                assert isinstance(outcome, Finished)
            self._persist(record)
        self._send_json(200, response)

    def _input(self, record: SessionRecord) -> None:
        body = self._read_json_object()
        value = body.get("value")
        if not isinstance(value, str):
            raise _HttpError(
                400, "bad_request", "'value' must be a string",
                'Send {"value":"409"}',
            )
        with record.lock:
            status = record.session.provide_input(value)
        self._send_json(200, {"status": status.value})

    def _run(self, record: SessionRecord) -> None:
        with record.lock:
            session = record.session
            if session.status is not Status.READY:
                raise _HttpError(
                    409, "not_ready",
                    f"this session is {session.status.value}, not ready",
                    "Provide input or create a new session first",
                )
            before = session.step_count
            trace = session.run_to_end()
            response = {
                "status": trace.status.value,
                "steps_added": len(trace.steps) - before,
            }
            self._persist(record)
        self._send_json(200, response)

    def _trace(self, record: SessionRecord) -> None:
        with record.lock:
            payload = trace_to_obj(record.session.trace())
        self._send_json(200, payload)

    def _snapshot(self, record: SessionRecord, k: int) -> None:
        with record.lock:
            trace = record.session.trace()
            try:
                snapshot = snapshot_at(trace, k)
            except IndexError:
                top = len(trace.steps) - 1
                raise _HttpError(
                    416, "snapshot_out_of_range",
                    f"step {k} is out of range",
                    f"Use k between -1 and {top}",
                ) from None
            view = three_block_view(snapshot)
        self._send_json(
            200,
            {
                "ram": [ram_cell_to_obj(cell) for cell in snapshot],
                "three_block": {
                    "before": [ram_cell_to_obj(c) for c in view.before],
                    "after_declaration": [
                        ram_cell_to_obj(c) for c in view.after_declaration
                    ],
                    "after_assignment": [
                        ram_cell_to_obj(c) for c in view.after_assignment
                    ],
                },
            },
        )

    def _post_snippet(self) -> None:
        body = self._read_json_object()
        kind = body.get("kind")
        if not isinstance(kind, str):
            raise _HttpError(
                400, "bad_request", "'kind' must be a string",
                'Send {"kind":"declaration","params":{...}}',
            )
        params = body.get("params", {})
        if not isinstance(params, dict):
            raise _HttpError(
                400, "bad_request", "'params' must be an object",
                'Send {"kind":"declaration","params":{"name":"sum","type":"Integer"}}',
            )
        try:
            snippet = generate_snippet(kind, params)
        except SnippetError as exc:
            self._send_json(
                422,
                {
                    "code": "bad_snippet",
                    "message": exc.message,
                    "suggestion": exc.suggestion,
                },
            )
            return
        self._send_json(
            200,
            {
                "lines": list(snippet.lines),
                "cursor_hint": {
                    "line": snippet.cursor_hint[0],
                    "column": snippet.cursor_hint[1],
                },
            },
        )

    def _persist(self, record: SessionRecord) -> None:
        directory = self.server.config.persist_dir
        if not directory or record.persisted:
            return
        if not record.session.status.is_terminal:
            return
        path = Path(directory) / f"{record.id}.json"
        try:
            path.write_text(
                render_trace_json(record.session.trace()) + "\n", encoding="utf-8"
            )
            record.persisted = True
        except OSError:
            self.log_error("could not persist session %s", record.id)
