import sys

import pytest

from crossed_cra import DEFAULT_PARAMS, resonant_working_point


@pytest.fixture
def params():
    return DEFAULT_PARAMS


@pytest.fixture
def resonant():
    return resonant_working_point(DEFAULT_PARAMS)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "REPORT_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
