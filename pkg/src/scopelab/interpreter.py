"""Tree-walking evaluator for SLX programs."""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import inspector
from .errors import (
    ArithmeticOverflow,
    ArityError,
    CallDepthExceeded,
    DisciplineError,
    DivisionByZero,
    NotARoutine,
    PromiseCycle,
    ScopeLabError,
    TypeMismatch,
    UnboundVariable,
    UnsetRead,
)
from .scoping import (
    UNSET,
    Discipline,
    FrameFactory,
    FrameKind,
    Promise,
    Routine,
    Value,
    bind_let,
    declare_scoped,
    render_value,
    resolve,
    super_assign,
)
from .syntax import (
    BinOp,
    Call,
    CallStmt,
    GlobalDecl,
    Inspect,
    IntLit,
    Let,
    LocalDecl,
    Neg,
    Print,
    Program,
    Return,
    RoutineDef,
    SuperAssign,
    VarRef,
    parse,
    tokenize,
)

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

# rough upper bound of Python frames consumed per SLX call level
_PY_FRAMES_PER_CALL = 8


class Defaults(enum.Enum):
    EAGER = "eager"
    LAZY = "lazy"


@dataclass(frozen=True)
class RunConfig:
    discipline: Discipline = Discipline.DYNAMIC
    defaults: Defaults = Defaults.EAGER
    trace: bool = False
    max_call_depth: int = 1000

    def __post_init__(self):
        if self.max_call_depth < 1:
            raise ValueError("max_call_depth must be positive")


@dataclass
class RunOutcome:
    stdout: list[str]
    final_globals: list[tuple[str, str]]
    error: Optional[tuple[str, str, Optional[int]]] = None
    trace: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None


class _Returned:
    __slots__ = ("value",)

    def __init__(self, value: int):
        self.value = value


def _checked(value: int, line: int) -> int:
    if value < INT_MIN or value > INT_MAX:
        raise ArithmeticOverflow(f"result {value} does not fit in 64 bits", line)
    return value


def _divide(a: int, b: int, line: int) -> int:
    if b == 0:
        raise DivisionByZero("division by zero", line)
    q = abs(a) // abs(b)
    return _checked(-q if (a < 0) != (b < 0) else q, line)


class Machine:
    """Mutable state of one program run.

    ``stack`` holds the live frames, global frame at the bottom.  ``forcing``
    tracks the ``(frame id, name)`` promises currently being evaluated, which is
    how self-referential defaults are caught.
    """

    def __init__(self, config: RunConfig = RunConfig()):
        self.config = config
        self.frames = FrameFactory()
        self.global_frame = self.frames.global_frame
        self.stack = [self.global_frame]
        self.stdout: list[str] = []
        self.trace_log: list[str] = []
        self.forcing: set[tuple[int, str]] = set()

    @property
    def discipline(self) -> Discipline:
        return self.config.discipline

    # ---------------------------------------------------------------- running

    def run(self, program: Program) -> Optional[ScopeLabError]:
        """Execute every top-level statement; return the error that stopped the run, if any."""
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, self.config.max_call_depth * _PY_FRAMES_PER_CALL + 1000))
        try:
            for stmt in program.body:
                self.exec_stmt(stmt, self.global_frame)
        except ScopeLabError as exc:
            return exc
        except RecursionError:
            # expression nesting deep enough to exhaust the host stack
            return CallDepthExceeded("host recursion limit reached")
        finally:
            sys.setrecursionlimit(limit)
            del self.stack[1:]
            self.forcing.clear()
        return None

    def final_globals(self) -> list[tuple[str, str]]:
        return sorted((name, render_value(v)) for name, v in self.global_frame.bindings.items())

    # ------------------------------------------------------------- statements

    def exec_body(self, body, frame) -> Optional[_Returned]:
        for stmt in body:
            signal = self.exec_stmt(stmt, frame)
            if signal is not None:
                return signal
        return None

    def exec_stmt(self, stmt, frame) -> Optional[_Returned]:
        """Run one statement in `frame`; a non-None result means the routine returns."""
        try:
            if isinstance(stmt, Let):
                bind_let(stmt.name, self.eval_expr(stmt.expr, frame), frame, self.discipline)
            elif isinstance(stmt, CallStmt):
                self.call_routine(stmt.call, frame)
            elif isinstance(stmt, Print):
                values = [self.eval_expr(arg, frame) for arg in stmt.args]
                self.stdout.append(" ".join(str(v) for v in values))
            elif isinstance(stmt, LocalDecl):
                init = None if stmt.init is None else self.eval_expr(stmt.init, frame)
                declare_scoped(stmt.name, init, frame, FrameKind.LOCAL)
            elif isinstance(stmt, GlobalDecl):
                init = None if stmt.init is None else self.eval_expr(stmt.init, frame)
                declare_scoped(stmt.name, init, frame, FrameKind.GLOBAL)
            elif isinstance(stmt, SuperAssign):
                if self.discipline is not Discipline.LEXICAL:
                    raise DisciplineError("super-assignment requires lexical discipline")
                super_assign(stmt.name, self.eval_expr(stmt.expr, frame), frame)
            elif isinstance(stmt, RoutineDef):
                captured = frame if self.discipline is Discipline.LEXICAL else None
                frame.bindings[stmt.name] = Routine(stmt.name, stmt.params, stmt.body, captured)
            elif isinstance(stmt, Inspect):
                self.stdout.extend(inspector.snapshot_lines(self))
            elif isinstance(stmt, Return):
                value = 0 if stmt.expr is None else self.eval_expr(stmt.expr, frame)
                return _Returned(value)
            else:
                raise TypeError(f"unknown statement {stmt!r}")
        except ScopeLabError as exc:
            if exc.line is None:
                exc.line = stmt.line
            raise
        return None

    # ------------------------------------------------------------ expressions

    def eval_expr(self, expr, frame) -> int:
        if isinstance(expr, IntLit):
            return _checked(expr.value, expr.line)
        if isinstance(expr, VarRef):
            return self.lookup(expr.name, frame, expr.line)
        if isinstance(expr, BinOp):
            a = self.eval_expr(expr.lhs, frame)
            b = self.eval_expr(expr.rhs, frame)
            op = expr.op
            if op == "+":
                return _checked(a + b, expr.line)
            if op == "-":
                return _checked(a - b, expr.line)
            if op == "*":
                return _checked(a * b, expr.line)
            return _divide(a, b, expr.line)
        if isinstance(expr, Neg):
            return _checked(-self.eval_expr(expr.operand, frame), expr.line)
        if isinstance(expr, Call):
            return self.call_routine(expr, frame)
        raise TypeError(f"unknown expression {expr!r}")

    def lookup(self, name: str, frame, line: int) -> int:
        try:
            value, hit, missed = resolve(name, frame, self.discipline)
        except UnboundVariable as exc:
            if self.config.trace:
                steps = [f"miss {label}" for label in exc.missed] + ["unbound"]
                self._trace(name, steps)
            exc.line = line
            raise
        if self.config.trace:
            steps = [f"miss {f.label}" for f in missed]
            steps.append(f"hit {hit.label} = {render_value(value)}")
            self._trace(name, steps)
        if isinstance(value, Promise):
            return self.force_promise(value, name)
        if value is UNSET:
            raise UnsetRead(name, line)
        if isinstance(value, Routine):
            raise TypeMismatch(f"routine {name!r} used as value", line)
        return value

    def _trace(self, name: str, steps: list[str]):
        self.trace_log.append(f"resolve {name} [{self.discipline.name}]: {', '.join(steps)}")

    def force_promise(self, promise: Promise, name: str) -> int:
        """Evaluate a default in its owner frame.  The result is never cached."""
        key = (promise.owner.id, name)
        if key in self.forcing:
            raise PromiseCycle(f"default for {name!r} refers to itself")
        self.forcing.add(key)
        try:
            return self.eval_expr(promise.expr, promise.owner)
        finally:
            self.forcing.discard(key)

    # ------------------------------------------------------------------ calls

    def call_routine(self, call: Call, frame) -> int:
        try:
            routine, _, _ = resolve(call.name, frame, self.discipline)
        except UnboundVariable as exc:
            exc.line = call.line
            raise
        if not isinstance(routine, Routine):
            raise NotARoutine(f"{call.name!r} is not a routine", call.line)
        if len(call.args) > len(routine.params):
            raise ArityError(
                f"{call.name} takes {len(routine.params)} argument(s), got {len(call.args)}",
                call.line,
            )
        args = [self.eval_expr(arg, frame) for arg in call.args]
        if len(self.stack) >= self.config.max_call_depth:
            raise CallDepthExceeded(f"call depth exceeds {self.config.max_call_depth}", call.line)

        if self.discipline is Discipline.LEXICAL:
            parent = routine.captured_env
        else:
            parent = self.global_frame  # placeholder; dynamic resolution never reads it
        callee = self.frames.new_frame(routine.name, parent, frame)
        self.stack.append(callee)
        try:
            lazy = self.config.defaults is Defaults.LAZY
            for i, param in enumerate(routine.params):
                if i < len(args):
                    value: Value = args[i]
                elif param.default is None:
                    value = UNSET
                elif lazy:
                    value = Promise(param.default, callee)
                else:
                    value = self.eval_expr(param.default, callee)
                callee.bindings[param.name] = value
            signal = self.exec_body(routine.body, callee)
        finally:
            self.stack.pop()
        return 0 if signal is None else signal.value


def _outcome(machine: Machine, error: Optional[ScopeLabError]) -> RunOutcome:
    return RunOutcome(
        stdout=list(machine.stdout),
        final_globals=machine.final_globals(),
        error=None if error is None else (error.kind, error.message, error.line),
        trace=list(machine.trace_log),
    )


def execute(program: Program, config: RunConfig = RunConfig()) -> RunOutcome:
    """Execute an already-parsed program in a fresh machine."""
    machine = Machine(config)
    return _outcome(machine, machine.run(program))


def run_program(source: str, config: RunConfig = RunConfig()) -> RunOutcome:
    """Lex, parse and execute `source`.  Never raises on bad programs."""
    try:
        program = parse(tokenize(source))
    except ScopeLabError as exc:
        return _outcome(Machine(config), exc)
    return execute(program, config)
