import pytest

from kakeyalab.galois import field_of_order
from kakeyalab.geometry import plane


@pytest.fixture(scope="session")
def gf():
    return field_of_order


@pytest.fixture(scope="session")
def pg2():
    return plane


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
