"""Shared fixtures and the acceptance summary printed at the end of a run."""

from __future__ import annotations

import pytest

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, name: str, passed: bool, detail: object = "") -> bool:
    """Log one acceptance line; returns ``passed`` so tests can assert on it."""
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  [{criterion}] {name}  {detail}".rstrip())
    return passed


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
