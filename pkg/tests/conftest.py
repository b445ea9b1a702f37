import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from scopelab import Defaults, Discipline, RunConfig, run_program  # noqa: E402

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

DYNAMIC, LEXICAL = Discipline.DYNAMIC, Discipline.LEXICAL
EAGER, LAZY = Defaults.EAGER, Defaults.LAZY


def run(source, discipline=DYNAMIC, defaults=EAGER, **kw):
    return run_program(source, RunConfig(discipline, defaults, **kw))


def corpus_source(name):
    return (CORPUS / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def manifest():
    return json.loads((CORPUS / "manifest.json").read_text())


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{status}] {number}. {title}")
