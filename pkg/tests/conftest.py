import time

import pytest

ACCEPTANCE_LINES = []


class _Criterion:
    """Times one acceptance criterion and records its PASS/FAIL line."""

    def __init__(self, number, text):
        self.number, self.text = number, text
        self.notes = []

    def note(self, msg):
        self.notes.append(str(msg))

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        extra = "; ".join(self.notes)
        line = f"{status} criterion {self.number}: {self.text} [{elapsed:.2f} s]"
        if extra:
            line += f" ({extra})"
        if exc_type is not None:
            line += f" -- {exc_type.__name__}: {exc}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
