"""Run small programs under SAS-style dynamic or R-style lexical scoping."""

from .errors import ScopeLabError
from .inspector import DivergenceReport, ScopeRecord, compare_disciplines, format_snapshot, snapshot_scopes
from .interpreter import Defaults, Machine, RunConfig, RunOutcome, execute, run_program
from .scoping import Discipline
from .syntax import parse, render_expr, tokenize

__all__ = [
    "Defaults",
    "Discipline",
    "DivergenceReport",
    "Machine",
    "RunConfig",
    "RunOutcome",
    "ScopeLabError",
    "ScopeRecord",
    "compare_disciplines",
    "execute",
    "format_snapshot",
    "parse",
    "render_expr",
    "run_program",
    "snapshot_scopes",
    "tokenize",
]
