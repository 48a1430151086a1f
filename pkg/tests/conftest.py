import pytest

from gridfloer.braid import parse_braid

ACCEPTANCE_LINES = []

KNOT_WORDS = ["1:", "2: 1", "2: 1 1 1", "2: -1", "2: -1 -1 -1", "3: 1 -2 1 -2", "3: 1 1 1 2"]


@pytest.fixture(params=KNOT_WORDS)
def knot_braid(request):
    return parse_braid(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
