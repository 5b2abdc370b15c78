import time
from contextlib import contextmanager

import pytest

_LINES = []


class _Criterion:
    def __init__(self, n, title, limit):
        self.n, self.title, self.limit = n, title, limit
        self.detail = ""


@pytest.fixture
def criterion():
    """Times a block, then records one pass/fail line for the acceptance summary."""
    @contextmanager
    def run(n, title, limit_s):
        c = _Criterion(n, title, limit_s)
        t = time.perf_counter()
        ok = False
        try:
            yield c
            ok = True
        finally:
            secs = time.perf_counter() - t
            within = secs <= limit_s
            verdict = "PASS" if ok and within else "FAIL"
            line = f"criterion {n:>2} {verdict}  {title}  [{secs:.3f}s / {limit_s}s] {c.detail}".rstrip()
            _LINES.append((n, line))
            print(line)
        assert within, f"criterion {n} took {secs:.3f}s > {limit_s}s"
    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
