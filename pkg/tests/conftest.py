"""Shared fixtures. Graph builds are cached per session to keep reruns fast."""

import pytest

from sawbound.automaton import build
from sawbound.simplify import Options

# one line per acceptance criterion, echoed after the run summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

BASELINE = Options(
    line_like=False,
    lacking_simpl=False,
    small_bridges=False,
    large_bridges=False,
    small_loops=False,
    two_pass=False,
)


@pytest.fixture(scope="session")
def g4_baseline():
    return build(4, BASELINE)


@pytest.fixture(scope="session")
def g10_default():
    return build(10)


@pytest.fixture(scope="session")
def g14_default():
    return build(14)
