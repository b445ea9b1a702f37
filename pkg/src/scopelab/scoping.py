"""Frames, runtime values and the two name-resolution disciplines.

A single :class:`Frame` type plays the role of both a SAS-style symbol table
and an R-style environment.  Every local frame carries two links:

``lexical_parent``
    the frame in which the executing routine was *defined*;
``dynamic_caller``
    the frame that was current at the *call site*.

Under :attr:`Discipline.DYNAMIC` resolution and ``let`` follow
``dynamic_caller``; under :attr:`Discipline.LEXICAL` they follow
``lexical_parent``.  Both chains end at the one global frame, which has no
links of its own.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ScopeDeclError, UnboundVariable
from .syntax import Expr, Param, Stmt, render_expr


class Discipline(enum.Enum):
    DYNAMIC = "dynamic"
    LEXICAL = "lexical"


class FrameKind(enum.Enum):
    GLOBAL = "global"
    LOCAL = "local"


class _Unset:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNSET"


UNSET = _Unset()


@dataclass(eq=False)
class Routine:
    name: str
    params: tuple[Param, ...]
    body: tuple[Stmt, ...]
    captured_env: Optional["Frame"] = None


@dataclass(eq=False)
class Promise:
    """An unevaluated default argument, re-evaluated on every reference."""

    expr: Expr
    owner: "Frame"


Value = Union[int, Routine, Promise, _Unset]


@dataclass(eq=False)
class Frame:
    id: int
    label: str
    kind: FrameKind
    lexical_parent: Optional["Frame"] = None
    dynamic_caller: Optional["Frame"] = None
    bindings: dict = field(default_factory=dict)

    def __repr__(self):
        return f"Frame({self.id}, {self.label})"

    def parent(self, discipline: Discipline) -> Optional["Frame"]:
        if discipline is Discipline.DYNAMIC:
            return self.dynamic_caller
        return self.lexical_parent

    def chain(self, discipline: Discipline):
        frame = self
        while frame is not None:
            yield frame
            frame = frame.parent(discipline)


class FrameFactory:
    """Hands out frames with strictly increasing ids for one run."""

    def __init__(self):
        self._ids = itertools.count()
        self.global_frame = Frame(next(self._ids), "GLOBAL", FrameKind.GLOBAL)

    def new_frame(self, label: str, lexical_parent: Frame, dynamic_caller: Frame) -> Frame:
        return Frame(
            next(self._ids),
            label.upper(),
            FrameKind.LOCAL,
            lexical_parent=lexical_parent,
            dynamic_caller=dynamic_caller,
        )


def global_of(frame: Frame) -> Frame:
    while frame.kind is not FrameKind.GLOBAL:
        frame = frame.dynamic_caller
    return frame


def resolve(name: str, current: Frame, discipline: Discipline) -> tuple[Value, Frame, list[Frame]]:
    """Find `name` along the discipline's chain.

    Returns ``(value, hit_frame, missed_frames)``.  Promises come back
    unforced.  Raises :class:`UnboundVariable` when the chain is exhausted.
    """
    missed = []
    for frame in current.chain(discipline):
        if name in frame.bindings:
            return frame.bindings[name], frame, missed
        missed.append(frame)
    raise UnboundVariable(name, [f.label for f in missed])


def bind_let(name: str, value: Value, current: Frame, discipline: Discipline) -> Frame:
    """Write `name` according to the discipline and return the frame written.

    DYNAMIC rebinds the nearest existing binding up the caller chain and only
    creates a new binding in `current` when none exists.  LEXICAL always binds
    in `current`.
    """
    if discipline is Discipline.DYNAMIC:
        for frame in current.chain(discipline):
            if name in frame.bindings:
                frame.bindings[name] = value
                return frame
    current.bindings[name] = value
    return current


def declare_scoped(name: str, init: Optional[Value], current: Frame, target: FrameKind) -> Frame:
    if target is FrameKind.LOCAL:
        if current.kind is not FrameKind.LOCAL:
            raise ScopeDeclError(f"'local {name}' is only allowed inside a routine")
        frame = current
    else:
        frame = global_of(current)
    if init is not None:
        frame.bindings[name] = init
    elif name not in frame.bindings:
        frame.bindings[name] = UNSET
    return frame


def super_assign(name: str, value: Value, current: Frame) -> Frame:
    """Rebind the nearest `name` strictly above `current` on the lexical chain.

    Falls back to creating the binding in the global frame.
    """
    frame = current.lexical_parent
    while frame is not None:
        if name in frame.bindings:
            frame.bindings[name] = value
            return frame
        frame = frame.lexical_parent
    top = global_of(current)
    top.bindings[name] = value
    return top


def render_value(value: Value) -> str:
    if isinstance(value, Routine):
        return f"<routine:{value.name.upper()}>"
    if isinstance(value, Promise):
        return render_expr(value.expr)
    if value is UNSET:
        return "<unset>"
    return str(value)
