from __future__ import annotations

import numpy as np
import pytest

from helpers import dstar

_CRITERION_RESULTS: list[tuple[int, str, bool]] = []


@pytest.fixture
def dstar_dataset():
    return dstar()


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)


@pytest.fixture
def criterion():
    """Record and print one pass/fail line per acceptance criterion."""

    def record(number: int, description: str, passed: bool) -> None:
        _CRITERION_RESULTS.append((number, description, passed))
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {description}"
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for number, description, passed in sorted(_CRITERION_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {description}")
