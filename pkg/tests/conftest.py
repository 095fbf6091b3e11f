import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (number, title, passed, seconds, detail) for each acceptance criterion that ran
CRITERIA: list[tuple[int, str, bool, float, str]] = []


@pytest.fixture
def criterion():
    """Time a criterion body, enforce its runtime limit, and record the outcome."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            CRITERIA.append((number, title, False, elapsed, detail))
            raise
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            CRITERIA.append((number, title, False, elapsed, f"runtime {elapsed:.2f} s exceeds {limit} s"))
            pytest.fail(f"criterion {number} took {elapsed:.2f} s, limit {limit} s")
        CRITERIA.append((number, title, True, elapsed, ""))

    return run


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, elapsed, detail in sorted(CRITERIA):
        line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f} s)"
        if detail:
            line += f" - {detail}"
        terminalreporter.write_line(line)
