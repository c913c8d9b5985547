import random

import pytest

from layoutcheck.dsl import parse_layout

_CRITERIA_KEY = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def lay():
    """Parse DSL text into a labeled layout."""
    return parse_layout


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title, ok, detail)``."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
        request.config.stash.setdefault(_CRITERIA_KEY, []).append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
