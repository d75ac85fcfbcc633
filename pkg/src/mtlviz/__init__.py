"""mtlviz: a line-by-line visualizer for a small BASIC-flavored language.

Programs run one line at a time; every step records which memory cells
were reserved or written, plain-language annotations, and any input or
output, so beginners can watch variables live in RAM as code executes.
"""

from .lang import (
    CheckedProgram,
    Diagnostic,
    ScalarType,
    Severity,
    SourceProgram,
    analyze,
    analyze_text,
    check,
    parse,
)
from .machine import (
    AwaitingInput,
    ExecutionMode,
    Fault,
    FaultKind,
    Faulted,
    Finished,
    Holds,
    InputConsumed,
    InputRequested,
    IntegerValue,
    OutputEmitted,
    RESERVED,
    RamCell,
    RamSnapshot,
    Reserved,
    STEP_CAP_DEFAULT,
    Session,
    Status,
    TextValue,
    Trace,
    TraceStep,
    Truncated,
    Value,
    new_session,
    snapshot_at,
)
from .render import (
    ThreeBlockView,
    render_ram_text,
    render_step_text,
    render_trace_json,
    three_block_view,
    trace_to_obj,
)
from .snippets import Snippet, SnippetError, generate_snippet

__version__ = "0.1.0"

__all__ = [
    "AwaitingInput", "CheckedProgram", "Diagnostic", "ExecutionMode",
    "Fault", "FaultKind", "Faulted", "Finished", "Holds", "InputConsumed",
    "InputRequested", "IntegerValue", "OutputEmitted", "RESERVED", "RamCell",
    "RamSnapshot", "Reserved", "STEP_CAP_DEFAULT", "ScalarType", "Session",
    "Severity", "Snippet", "SnippetError", "SourceProgram", "Status",
    "TextValue", "ThreeBlockView", "Trace", "TraceStep", "Truncated",
    "Value", "analyze", "analyze_text", "check", "generate_snippet",
    "new_session", "parse", "render_ram_text", "render_step_text",
    "render_trace_json", "snapshot_at", "three_block_view", "trace_to_obj",
    "__version__",
]
