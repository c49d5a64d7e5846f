import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_quat_hermitian(rng, n=4):
    q = rng.normal(size=(n, n, 4))
    q = q + np.swapaxes(q, 0, 1) * np.array([1, -1, -1, -1])
    for i in range(n):
        q[i, i, 1:] = 0.0
    return q


ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    """Store and print one PASS/FAIL line for an acceptance criterion."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
