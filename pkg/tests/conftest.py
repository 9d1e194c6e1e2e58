import pytest

from coarsekit.constructions import shipped_presentations
from coarsekit.core import ScaleWindow


@pytest.fixture(scope="session")
def shipped():
    return shipped_presentations()


@pytest.fixture(scope="session")
def sw():
    return ScaleWindow.default()


@pytest.fixture(scope="session")
def small_sw():
    return ScaleWindow(rmax=8, window=256, cutoff=128)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
