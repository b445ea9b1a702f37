"""Scope snapshots and the dynamic-vs-lexical divergence report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .scoping import Discipline, Frame, Routine, render_value


@dataclass(frozen=True)
class ScopeRecord:
    scope: str
    name: str
    value_text: str


def frame_records(frame: Frame, include_routines: bool = True) -> list[ScopeRecord]:
    return [
        ScopeRecord(frame.label, name, render_value(value))
        for name, value in sorted(frame.bindings.items())
        if include_routines or not isinstance(value, Routine)
    ]


def snapshot_scopes(state) -> list[ScopeRecord]:
    """Rows for every live frame, innermost first and GLOBAL last.

    Only variables are listed; routine bindings are left out the same way a
    macro symbol table never lists the macros themselves.
    """
    records = []
    for frame in reversed(state.stack):
        records.extend(frame_records(frame, include_routines=False))
    return records


def format_snapshot(records: list[ScopeRecord]) -> str:
    return "".join(f"{r.scope} {r.name} {r.value_text}\n" for r in records)


def snapshot_lines(state) -> list[str]:
    return format_snapshot(snapshot_scopes(state)).splitlines()


@dataclass
class DivergenceReport:
    stdout_divergence: Optional[tuple[int, Optional[str], Optional[str]]] = None
    global_divergences: list[tuple[str, Optional[str], Optional[str]]] = field(default_factory=list)
    errors: Optional[tuple[Optional[str], Optional[str]]] = None
    identical: bool = True

    def render(self) -> str:
        lines = ["IDENTICAL" if self.identical else "DIVERGENT"]
        if self.stdout_divergence is not None:
            i, dyn, lex = self.stdout_divergence
            lines.append(f"stdout[{i}]: dynamic={_show(dyn)} lexical={_show(lex)}")
        for name, dyn, lex in self.global_divergences:
            lines.append(f"global {name}: dynamic={_show(dyn)} lexical={_show(lex)}")
        if self.errors is not None and self.errors[0] != self.errors[1]:
            dyn, lex = self.errors
            lines.append(f"error: dynamic={_show(dyn)} lexical={_show(lex)}")
        return "\n".join(lines) + "\n"


def _show(text: Optional[str]) -> str:
    return "<absent>" if text is None else text


def _error_summary(outcome) -> Optional[str]:
    if outcome.error is None:
        return None
    kind, message, line = outcome.error
    return f"{kind} line {line}: {message}"


def compare_disciplines(source: str, defaults=None) -> DivergenceReport:
    """Run `source` once per discipline and report where the runs disagree."""
    from .interpreter import Defaults, RunConfig, run_program

    defaults = Defaults.EAGER if defaults is None else defaults
    dyn = run_program(source, RunConfig(Discipline.DYNAMIC, defaults))
    lex = run_program(source, RunConfig(Discipline.LEXICAL, defaults))
    report = DivergenceReport()

    for i in range(max(len(dyn.stdout), len(lex.stdout))):
        a = dyn.stdout[i] if i < len(dyn.stdout) else None
        b = lex.stdout[i] if i < len(lex.stdout) else None
        if a != b:
            report.stdout_divergence = (i, a, b)
            break

    dyn_globals = dict(dyn.final_globals)
    lex_globals = dict(lex.final_globals)
    for name in sorted(dyn_globals.keys() | lex_globals.keys()):
        a, b = dyn_globals.get(name), lex_globals.get(name)
        if a != b:
            report.global_divergences.append((name, a, b))

    errors = (_error_summary(dyn), _error_summary(lex))
    if errors != (None, None):
        report.errors = errors
    report.identical = (
        report.stdout_divergence is None
        and not report.global_divergences
        and errors[0] == errors[1]
    )
    return report
