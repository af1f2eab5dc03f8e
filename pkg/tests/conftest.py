from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hilbchow.surface_algebra import load_surface

P2 = load_surface("P2")
P1P1 = load_surface("P1xP1")
SURFACES = {"P2": P2, "P1xP1": P1P1}


@pytest.fixture(params=sorted(SURFACES))
def surface(request):
    return SURFACES[request.param]


@pytest.fixture
def p2():
    return P2


@pytest.fixture
def p1p1():
    return P1P1


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
