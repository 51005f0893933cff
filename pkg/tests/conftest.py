import re
import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


class Criterion:
    def __init__(self, label):
        self.label = label
        self.detail = ""


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the end-of-run summary."""

    @contextmanager
    def _record(label):
        c = Criterion(label)
        t0 = time.perf_counter()
        try:
            yield c
        except BaseException as exc:
            _ACCEPTANCE[label] = (False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            raise
        _ACCEPTANCE[label] = (True, f"{c.detail} [{time.perf_counter() - t0:.1f} s]".strip())

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(label):
        num, rest = re.match(r"(\d+)(.*)", label).groups()
        return int(num), rest

    for label in sorted(_ACCEPTANCE, key=order):
        ok, detail = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
