import pytest

from wheelgreen.errata import default_sweep
from wheelgreen.wheel import WheelParams

SWEEP = default_sweep()
K4 = WheelParams(3, 1, 1.0, 1.0)
W22 = WheelParams(2, 2, 1.0, 1.0)

# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def sweep_id(p):
    return f"m{p.m}-d{p.d}-a{p.a:g}-c{p.c:g}"


@pytest.fixture(params=SWEEP, ids=sweep_id)
def sweep_point(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
