import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from holwfs import load
from holwfs.engine import Engine

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

_ACCEPTANCE = []


@contextmanager
def criterion(number, title, limit=None):
    """Record a PASS/FAIL line for one acceptance criterion."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except BaseException as exc:
        line = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {exc})"
        _ACCEPTANCE.append((number, line))
        print(line, file=sys.stderr)
        raise
    line = f"PASS criterion {number}: {title} ({elapsed:.2f}s)"
    _ACCEPTANCE.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


def program_text(name):
    return (PROGRAMS / name).read_text()


@pytest.fixture
def engine_for():
    def make(text, **kw):
        return Engine(load(text), **kw)
    return make
