"""Exception hierarchy shared by every stage of a run.

Each error carries a ``kind`` (the class name, used in CLI output and
:class:`~scopelab.interpreter.RunOutcome`) and the source line it refers to.
"""

from __future__ import annotations


class ScopeLabError(Exception):
    """Base class for all errors raised while lexing, parsing or executing."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line

    @property
    def kind(self) -> str:
        return type(self).__name__


class LexError(ScopeLabError):
    def __init__(self, line: int, col: int, char: str):
        super().__init__(f"unexpected character {char!r} at column {col}", line)
        self.col = col
        self.char = char


class ParseError(ScopeLabError):
    def __init__(self, line: int, col: int, expected, found: str, message: str | None = None):
        expected = tuple(expected)
        if message is None:
            message = f"expected {' or '.join(expected)}, found {found} at column {col}"
        super().__init__(message, line)
        self.col = col
        self.expected = expected
        self.found = found


class UnboundVariable(ScopeLabError):
    def __init__(self, name: str, missed: list, line: int | None = None):
        path = ", ".join(str(m) for m in missed)
        super().__init__(f"unbound variable {name!r} (searched {path})", line)
        self.name = name
        self.missed = list(missed)


class UnsetRead(ScopeLabError):
    def __init__(self, name: str, line: int | None = None):
        super().__init__(f"variable {name!r} was declared but never assigned", line)
        self.name = name


class DivisionByZero(ScopeLabError):
    pass


class TypeMismatch(ScopeLabError):
    pass


class ArithmeticOverflow(ScopeLabError):
    pass


class NotARoutine(ScopeLabError):
    pass


class ArityError(ScopeLabError):
    pass


class CallDepthExceeded(ScopeLabError):
    pass


class PromiseCycle(ScopeLabError):
    pass


class DisciplineError(ScopeLabError):
    pass


class ScopeDeclError(ScopeLabError):
    pass
