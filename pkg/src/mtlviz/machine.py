"""Small-step interpreter that records a RAM-diagram trace.

Each successful step executes exactly one source line and appends one
TraceStep. A step either commits completely (inputs consumed, cells
written, events recorded) or leaves the session untouched, so replaying a
trace never shows a half-applied line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .lang.checker import CheckedProgram
from .lang.nodes import (
    ArrayRef,
    Assign,
    BinaryOp,
    DeclareArray,
    DeclareScalar,
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
    ScalarType,
    Statement,
    StringLiteral,
    VarRef,
    render_expr,
)

STEP_CAP_DEFAULT = 10000


# --- values and RAM ---------------------------------------------------------


@dataclass(frozen=True)
class IntegerValue:
    value: int


@dataclass(frozen=True)
class TextValue:
    text: str


Value = IntegerValue | TextValue


@dataclass(frozen=True)
class Reserved:
    pass


@dataclass(frozen=True)
class Holds:
    value: Value


CellState = Reserved | Holds
RESERVED = Reserved()


@dataclass(frozen=True)
class RamCell:
    name: str
    state: CellState


RamSnapshot = tuple[RamCell, ...]
EMPTY_RAM: RamSnapshot = ()


def display_text(value: Value) -> str:
    """How a value appears in program output and prompts."""
    return str(value.value) if isinstance(value, IntegerValue) else value.text


def render_value(value: Value) -> str:
    """How a value appears in RAM diagrams and annotations."""
    return str(value.value) if isinstance(value, IntegerValue) else f'"{value.text}"'


# --- trace ------------------------------------------------------------------


@dataclass(frozen=True)
class InputRequested:
    prompt: str


@dataclass(frozen=True)
class InputConsumed:
    prompt: str
    raw: str


@dataclass(frozen=True)
class OutputEmitted:
    text: str


IoEvent = InputRequested | InputConsumed | OutputEmitted


@dataclass(frozen=True)
class TraceStep:
    index: int
    line: int
    statement_text: str
    ram_after: RamSnapshot
    annotations: tuple[str, ...]
    io: tuple[IoEvent, ...] = ()


class FaultKind(enum.Enum):
    NOT_A_NUMBER = "NotANumber"
    VALUE_NOT_SET = "ValueNotSet"
    INDEX_OUT_OF_RANGE = "IndexOutOfRange"
    DIVISION_BY_ZERO = "DivisionByZero"
    OVERFLOW = "Overflow"
    INFINITE_LOOP_SUSPECTED = "InfiniteLoopSuspected"


@dataclass(frozen=True)
class Fault:
    line: int
    kind: FaultKind
    message: str
    suggestion: str

    def __post_init__(self) -> None:
        if not self.suggestion:
            raise ValueError("faults must carry a suggestion")


class Status(enum.Enum):
    READY = "ready"
    AWAITING_INPUT = "awaiting_input"
    FINISHED = "finished"
    FAULTED = "faulted"
    TRUNCATED = "truncated"

    @property
    def is_terminal(self) -> bool:
        return self in (Status.FINISHED, Status.FAULTED, Status.TRUNCATED)


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]
    status: Status
    fault: Fault | None = None

    @property
    def outputs(self) -> tuple[str, ...]:
        return tuple(
            event.text
            for step in self.steps
            for event in step.io
            if isinstance(event, OutputEmitted)
        )


def snapshot_at(trace: Trace, k: int) -> RamSnapshot:
    """RAM after step k; k = -1 is the empty RAM before execution."""
    if k == -1:
        return EMPTY_RAM
    if not 0 <= k < len(trace.steps):
        raise IndexError(
            f"step {k} is out of range; use -1 through {len(trace.steps) - 1}"
        )
    return trace.steps[k].ram_after


# --- step outcomes ----------------------------------------------------------


@dataclass(frozen=True)
class AwaitingInput:
    prompt: str


@dataclass(frozen=True)
class Finished:
    pass


@dataclass(frozen=True)
class Faulted:
    fault: Fault


@dataclass(frozen=True)
class Truncated:
    fault: Fault


StepOutcome = TraceStep | AwaitingInput | Finished | Faulted | Truncated


class ExecutionMode(enum.Enum):
    LINE_BY_LINE = "line_by_line"
    COMPLETE_RUN = "complete_run"


# --- annotation wording -----------------------------------------------------

_ORDINALS = (
    "first", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth",
)


def element_phrase(index: int) -> str:
    if 0 <= index < len(_ORDINALS):
        return f"the {_ORDINALS[index]} element"
    return f"element {index}"


def scalar_reserved_caption(name: str) -> str:
    return (
        "A memory location is reserved for holding a value "
        f"to be assigned to {name}."
    )


def array_reserved_caption(index: int, array: str) -> str:
    return (
        "Memory location is reserved for holding "
        f"{element_phrase(index)} of array {array}."
    )


def assigned_caption(cell: str, value: Value) -> str:
    return (
        f"A memory location holding {render_value(value)} "
        f"as the current value of {cell}."
    )


def input_element_caption(index: int, array: str, value: Value) -> str:
    return (
        f"A memory location reserved for {element_phrase(index)} "
        f"of array {array} is now holding number {render_value(value)}."
    )


def _type_article(scalar_type: ScalarType) -> str:
    return "an Integer" if scalar_type is ScalarType.INTEGER else "a String"


# --- internal signals -------------------------------------------------------


class _NeedInput(Exception):
    def __init__(self, prompt: str):
        super().__init__(prompt)
        self.prompt = prompt


class _FaultSignal(Exception):
    def __init__(self, fault: Fault):
        super().__init__(fault.message)
        self.fault = fault


@dataclass(frozen=True)
class _Write:
    cell: str
    state: CellState
    caption: str


@dataclass
class _Plan:
    next_pc: int
    headline: str
    writes: list[_Write] = field(default_factory=list)
    loop_set: tuple[int, int, int] | None = None  # (for_line, end, step)
    resume_set: int | None = None
    resume_clear: bool = False


@dataclass
class _LoopState:
    end: int
    step: int


# --- session -----------------------------------------------------------------


class Session:
    """One program execution, stepped a line at a time."""

    def __init__(
        self,
        program: CheckedProgram,
        mode: ExecutionMode = ExecutionMode.LINE_BY_LINE,
        initial_inputs: tuple[str, ...] = (),
        step_cap: int = STEP_CAP_DEFAULT,
    ):
        if step_cap < 1:
            raise ValueError("step_cap must be at least 1")
        self.program = program
        self.mode = mode
        self.step_cap = step_cap
        self._inputs: list[str] = list(initial_inputs)
        self._pc = 0
        self._ram: list[RamCell] = []
        self._ram_index: dict[str, int] = {}
        self._loops: dict[int, _LoopState] = {}
        self._resume_at: int | None = None
        self._history: list[TraceStep] = []
        self._status = Status.READY
        self._fault: Fault | None = None
        self._prompt: str | None = None

    @property
    def status(self) -> Status:
        return self._status

    @property
    def fault(self) -> Fault | None:
        return self._fault

    @property
    def pending_prompt(self) -> str | None:
        return self._prompt

    @property
    def step_count(self) -> int:
        return len(self._history)

    def ram_snapshot(self) -> RamSnapshot:
        return tuple(self._ram)

    def trace(self) -> Trace:
        return Trace(tuple(self._history), self._status, self._fault)

    def provide_input(self, raw: str) -> Status:
        """Queue one input value; a session waiting on input becomes ready."""
        if self._status.is_terminal:
            return self._status
        self._inputs.append(raw)
        if self._status is Status.AWAITING_INPUT:
            self._status = Status.READY
            self._prompt = None
        return self._status

    def step(self) -> StepOutcome:
        if self._status is Status.AWAITING_INPUT:
            assert self._prompt is not None
            return AwaitingInput(self._prompt)
        if self._status is Status.FINISHED:
            return Finished()
        if self._status is Status.FAULTED:
            assert self._fault is not None
            return Faulted(self._fault)
        if self._status is Status.TRUNCATED:
            assert self._fault is not None
            return Truncated(self._fault)

        statements = self.program.statements
        if self._pc >= len(statements):
            self._status = Status.FINISHED
            return Finished()
        stmt = statements[self._pc]
        if len(self._history) >= self.step_cap:
            fault = Fault(
                stmt.line,
                FaultKind.INFINITE_LOOP_SUSPECTED,
                f"stopped after {self.step_cap} steps; "
                "the program may loop forever",
                "Check that your loop condition can become false.",
            )
            self._status = Status.TRUNCATED
            self._fault = fault
            return Truncated(fault)

        evaluator = _Evaluator(self, stmt.line)
        try:
            plan = self._execute(stmt, evaluator)
        except _NeedInput as need:
            self._status = Status.AWAITING_INPUT
            self._prompt = need.prompt
            return AwaitingInput(need.prompt)
        except _FaultSignal as signal:
            self._status = Status.FAULTED
            self._fault = signal.fault
            return Faulted(signal.fault)

        # commit
        del self._inputs[:evaluator.taken]
        for write in plan.writes:
            self._write_cell(write.cell, write.state)
        if plan.loop_set is not None:
            for_line, end, step = plan.loop_set
            self._loops[for_line] = _LoopState(end, step)
        if plan.resume_set is not None:
            self._resume_at = plan.resume_set
        if plan.resume_clear:
            self._resume_at = None
        captions = tuple(write.caption for write in plan.writes if write.caption)
        trace_step = TraceStep(
            index=len(self._history),
            line=stmt.line,
            statement_text=stmt.text,
            ram_after=self.ram_snapshot(),
            annotations=(plan.headline, *captions),
            io=tuple(evaluator.io),
        )
        self._history.append(trace_step)
        self._pc = plan.next_pc
        if self._pc >= len(statements):
            self._status = Status.FINISHED
        return trace_step

    def run_to_end(self) -> Trace:
        while isinstance(self.step(), TraceStep):
            pass
        return self.trace()

    # -- execution ------------------------------------------------------------

    def _write_cell(self, name: str, state: CellState) -> None:
        at = self._ram_index.get(name)
        if at is None:
            self._ram_index[name] = len(self._ram)
            self._ram.append(RamCell(name, state))
        else:
            self._ram[at] = RamCell(name, state)

    def _cell_state(self, name: str) -> CellState | None:
        at = self._ram_index.get(name)
        return None if at is None else self._ram[at].state

    def _after_line(self, line: int) -> int:
        return self.program.index_of_line(line) + 1

    def _execute(self, stmt: Statement, ev: "_Evaluator") -> _Plan:
        if isinstance(stmt, DeclareScalar):
            name = self.program.symbol(stmt.name).canonical
            plan = _Plan(
                self._pc + 1,
                f"Line {stmt.line} declares {name} as "
                f"{_type_article(stmt.scalar_type)}.",
            )
            plan.writes.append(_Write(name, RESERVED, scalar_reserved_caption(name)))
            return plan
        if isinstance(stmt, DeclareArray):
            info = self.program.symbol(stmt.name)
            name = info.canonical
            bound = info.array_bound
            assert bound is not None
            plan = _Plan(
                self._pc + 1,
                f"Line {stmt.line} declares the array {name} with elements "
                f"{name}(0) to {name}({bound}).",
            )
            for i in range(bound + 1):
                plan.writes.append(
                    _Write(f"{name}({i})", RESERVED, array_reserved_caption(i, name))
                )
            return plan
        if isinstance(stmt, Assign):
            return self._execute_assign(stmt, ev)
        if isinstance(stmt, Output):
            value = ev.eval(stmt.value)
            text = display_text(value)
            ev.io.append(OutputEmitted(text))
            return _Plan(self._pc + 1, f'Line {stmt.line} displays "{text}".')
        if isinstance(stmt, ForHeader):
            return self._execute_for(stmt, ev)
        if isinstance(stmt, NextStmt):
            return self._execute_next(stmt, ev)
        if isinstance(stmt, IfHeader):
            return self._execute_if(stmt, ev)
        if isinstance(stmt, ElseMarker):
            block = self.program.else_to_if[stmt.line]
            return _Plan(
                self._after_line(block.end_line),
                f"Line {stmt.line} ends the true branch; "
                "execution skips past End If.",
            )
        if isinstance(stmt, EndIfMarker):
            return _Plan(self._pc + 1, f"Line {stmt.line} closes the If block.")
        raise TypeError(f"not a statement: {stmt!r}")

    def _execute_assign(self, stmt: Assign, ev: "_Evaluator") -> _Plan:
        value = ev.eval(stmt.value)
        info = self.program.symbol(stmt.target.name)
        name = info.canonical
        element: int | None = None
        if isinstance(stmt.target, ArrayRef):
            bound = info.array_bound
            assert bound is not None
            element = ev.eval_int(stmt.target.index)
            if not 0 <= element <= bound:
                ev.fault(
                    FaultKind.INDEX_OUT_OF_RANGE,
                    f"'{name}({element})' is outside the array; {name} has "
                    f"elements {name}(0) to {name}({bound})",
                    f"Use an index between 0 and {bound}",
                )
            cell = f"{name}({element})"
        else:
            cell = name
        if self._cell_state(cell) is None:
            ev.fault(
                FaultKind.VALUE_NOT_SET,
                f"'{cell}' has no memory cell yet",
                "Make sure the line that declares it runs first",
            )
        if info.scalar_type is ScalarType.INTEGER and isinstance(value, TextValue):
            value = IntegerValue(ev.coerce_number(value.text))
        if ev.taken and element is not None and isinstance(value, IntegerValue):
            caption = input_element_caption(element, name, value)
        else:
            caption = assigned_caption(cell, value)
        if ev.taken:
            headline = (
                f"Line {stmt.line} reads input and stores "
                f"{render_value(value)} in {cell}."
            )
        else:
            headline = (
                f"Line {stmt.line} assigns {render_value(value)} to {cell}."
            )
        plan = _Plan(self._pc + 1, headline)
        plan.writes.append(_Write(cell, Holds(value), caption))
        return plan

    def _execute_for(self, stmt: ForHeader, ev: "_Evaluator") -> _Plan:
        line = stmt.line
        counter = self.program.symbol(stmt.counter).canonical
        next_line = self.program.for_to_next[line]
        if self._resume_at == line:
            loop = self._loops[line]
            state = self._cell_state(counter)
            assert isinstance(state, Holds) and isinstance(state.value, IntegerValue)
            current = state.value.value
            continuing = current <= loop.end if loop.step >= 0 else current >= loop.end
            plan = _Plan(
                self._pc + 1 if continuing else self._after_line(next_line),
                f"Line {line} checks the loop again: {counter} is {current}, "
                + ("so another pass begins." if continuing else "so the loop ends."),
            )
            plan.resume_clear = True
            return plan

        start = ev.eval_int(stmt.start)
        end = ev.eval_int(stmt.end)
        step = ev.eval_int(stmt.step) if stmt.step is not None else 1
        continuing = start <= end if step >= 0 else start >= end
        if continuing:
            headline = (
                f"Line {line} starts a loop: {counter} runs from {start} to {end}."
                if stmt.step is None
                else f"Line {line} starts a loop: {counter} runs from {start} "
                f"to {end} in steps of {step}."
            )
        else:
            headline = (
                f"Line {line} starts a loop, but {counter} = {start} is already "
                f"past {end}, so the loop body is skipped."
            )
        plan = _Plan(
            self._pc + 1 if continuing else self._after_line(next_line),
            headline,
        )
        plan.writes.append(
            _Write(
                counter,
                Holds(IntegerValue(start)),
                assigned_caption(counter, IntegerValue(start)),
            )
        )
        plan.loop_set = (line, end, step)
        plan.resume_clear = True
        return plan

    def _execute_next(self, stmt: NextStmt, ev: "_Evaluator") -> _Plan:
        for_line = self.program.next_to_for[stmt.line]
        loop = self._loops[for_line]
        header = self.program.statements[self.program.index_of_line(for_line)]
        assert isinstance(header, ForHeader)
        counter = self.program.symbol(header.counter).canonical
        state = self._cell_state(counter)
        assert isinstance(state, Holds) and isinstance(state.value, IntegerValue)
        bumped = ev.checked(state.value.value + loop.step)
        if loop.step >= 0:
            change = f"increases {counter} by {loop.step}"
        else:
            change = f"decreases {counter} by {-loop.step}"
        plan = _Plan(
            self.program.index_of_line(for_line),
            f"Line {stmt.line} {change} and sends execution back "
            f"to line {for_line}.",
        )
        plan.writes.append(
            _Write(
                counter,
                Holds(IntegerValue(bumped)),
                assigned_caption(counter, IntegerValue(bumped)),
            )
        )
        plan.resume_set = for_line
        return plan

    def _execute_if(self, stmt: IfHeader, ev: "_Evaluator") -> _Plan:
        condition = stmt.condition
        assert isinstance(condition, BinaryOp)
        truth = ev.eval_condition(condition)
        block = self.program.if_blocks[stmt.line]
        shown = render_expr(condition)
        if truth:
            return _Plan(
                self._pc + 1,
                f"Line {stmt.line} finds {shown} is true, so the next line runs.",
            )
        if block.else_line is not None:
            return _Plan(
                self.program.index_of_line(block.else_line) + 1,
                f"Line {stmt.line} finds {shown} is false, so execution "
                "jumps to the Else branch.",
            )
        return _Plan(
            self._after_line(block.end_line),
            f"Line {stmt.line} finds {shown} is false, so execution "
            "skips past End If.",
        )


class _Evaluator:
    """Evaluates expressions for one step; nothing it does is committed
    unless the whole step succeeds."""

    def __init__(self, session: Session, line: int):
        self.session = session
        self.line = line
        self.io: list[object] = []
        self.taken = 0

    def fault(self, kind: FaultKind, message: str, suggestion: str) -> None:
        raise _FaultSignal(Fault(self.line, kind, message, suggestion))

    def checked(self, value: int) -> int:
        if not INT_MIN <= value <= INT_MAX:
            self.fault(
                FaultKind.OVERFLOW,
                "the result does not fit in an Integer",
                f"Keep values between {INT_MIN} and {INT_MAX}",
            )
        return value

    def coerce_number(self, raw: str) -> int:
        text = raw.strip()
        body = text[1:] if text.startswith("-") else text
        if not (body and all("0" <= ch <= "9" for ch in body)):
            self.fault(
                FaultKind.NOT_A_NUMBER,
                f"the input '{raw}' is not a whole number",
                "Type a whole number such as 42",
            )
        value = int(text)
        if not INT_MIN <= value <= INT_MAX:
            self.fault(
                FaultKind.OVERFLOW,
                f"the input '{raw}' does not fit in an Integer",
                "Type a smaller whole number",
            )
        return value

    def eval(self, expr: Expr) -> Value:
        if isinstance(expr, IntLiteral):
            return IntegerValue(expr.value)
        if isinstance(expr, StringLiteral):
            return TextValue(expr.value)
        if isinstance(expr, VarRef):
            name = self.session.program.symbol(expr.name).canonical
            return self._read_cell(name)
        if isinstance(expr, ArrayRef):
            info = self.session.program.symbol(expr.name)
            name = info.canonical
            bound = info.array_bound
            assert bound is not None
            index = self.eval_int(expr.index)
            if not 0 <= index <= bound:
                self.fault(
                    FaultKind.INDEX_OUT_OF_RANGE,
                    f"'{name}({index})' is outside the array; {name} has "
                    f"elements {name}(0) to {name}({bound})",
                    f"Use an index between 0 and {bound}",
                )
            return self._read_cell(f"{name}({index})")
        if isinstance(expr, InputBoxCall):
            prompt = display_text(self.eval(expr.prompt))
            self.io.append(InputRequested(prompt))
            queue = self.session._inputs
            if self.taken < len(queue):
                raw = queue[self.taken]
                self.taken += 1
                self.io.append(InputConsumed(prompt, raw))
                return TextValue(raw)
            raise _NeedInput(prompt)
        if isinstance(expr, Negate):
            return IntegerValue(self.checked(-self.eval_int(expr.operand)))
        if isinstance(expr, BinaryOp):
            return self._eval_binary(expr)
        raise TypeError(f"not an expression: {expr!r}")

    def eval_int(self, expr: Expr) -> int:
        value = self.eval(expr)
        assert isinstance(value, IntegerValue), "checker admits only Integers here"
        return value.value

    def _read_cell(self, name: str) -> Value:
        state = self.session._cell_state(name)
        if state is None or isinstance(state, Reserved):
            self.fault(
                FaultKind.VALUE_NOT_SET,
                f"'{name}' has no value yet",
                f"Assign {name} a value on an earlier line",
            )
        assert isinstance(state, Holds)
        return state.value

    def _eval_binary(self, expr: BinaryOp) -> Value:
        left = self.eval(expr.left)
        right = self.eval(expr.right)
        op = expr.op
        if op == "+":
            if isinstance(left, IntegerValue) and isinstance(right, IntegerValue):
                return IntegerValue(self.checked(left.value + right.value))
            return TextValue(display_text(left) + display_text(right))
        assert isinstance(left, IntegerValue) and isinstance(right, IntegerValue)
        a, b = left.value, right.value
        if op == "-":
            return IntegerValue(self.checked(a - b))
        if op == "*":
            return IntegerValue(self.checked(a * b))
        if op in ("\\", "Mod"):
            if b == 0:
                self.fault(
                    FaultKind.DIVISION_BY_ZERO,
                    "cannot divide by zero",
                    "Make sure the value you divide by is not zero",
                )
            quotient = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                quotient = -quotient
            if op == "\\":
                return IntegerValue(self.checked(quotient))
            return IntegerValue(a - quotient * b)
        raise AssertionError(f"unexpected operator {op!r}")

    def eval_condition(self, expr: BinaryOp) -> bool:
        left = self.eval(expr.left)
        right = self.eval(expr.right)
        if isinstance(left, IntegerValue) and isinstance(right, IntegerValue):
            a, b = left.value, right.value
        else:
            assert isinstance(left, TextValue) and isinstance(right, TextValue)
            a, b = left.text, right.text
            assert expr.op in ("=", "<>"), "checker limits text comparisons"
        return {
            "=": a == b,
            "<>": a != b,
            "<": a < b,
            "<=": a <= b,
            ">": a > b,
            ">=": a >= b,
        }[expr.op]


def new_session(
    program: CheckedProgram,
    mode: ExecutionMode = ExecutionMode.LINE_BY_LINE,
    initial_inputs: tuple[str, ...] = (),
    step_cap: int = STEP_CAP_DEFAULT,
) -> Session:
    return Session(program, mode, initial_inputs, step_cap)
