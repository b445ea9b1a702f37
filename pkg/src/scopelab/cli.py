"""``scopelab`` command line: run, dump and diff SLX scripts."""

from __future__ import annotations

import argparse
import sys

from .inspector import compare_disciplines, format_snapshot, ScopeRecord
from .interpreter import Defaults, RunConfig, run_program
from .scoping import Discipline

EXIT_OK = 0
EXIT_PROGRAM = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    # argparse already exits with 2 on usage errors; keep it that way
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scopelab", description="Run SLX programs under dynamic or lexical scoping.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("run", "execute a script"),
        ("dump", "execute a script, then list the final global frame"),
        ("diff", "run under both disciplines and report divergences"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("script")
        p.add_argument("--discipline", choices=["dynamic", "lexical"], default="dynamic")
        p.add_argument("--defaults", choices=["eager", "lazy"], default="eager")
        p.add_argument("--trace", action="store_true")
    return parser


def _write_lines(stream, lines):
    for line in lines:
        stream.write(line + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        with open(args.script, encoding="utf-8") as fh:
            source = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"scopelab: cannot read {args.script}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    defaults = Defaults(args.defaults)
    if args.command == "diff":
        report = compare_disciplines(source, defaults)
        sys.stdout.write(report.render())
        return EXIT_OK if report.identical else EXIT_PROGRAM

    config = RunConfig(Discipline(args.discipline), defaults, trace=args.trace)
    outcome = run_program(source, config)
    _write_lines(sys.stdout, outcome.stdout)
    _write_lines(sys.stderr, outcome.trace)
    if args.command == "dump":
        records = [ScopeRecord("GLOBAL", name, text) for name, text in outcome.final_globals]
        sys.stdout.write(format_snapshot(records))
    if outcome.error is not None:
        kind, message, line = outcome.error
        print(f"error[{kind}] line {line}: {message}", file=sys.stderr)
        return EXIT_PROGRAM
    return EXIT_OK
