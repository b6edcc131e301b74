from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from dops.arrangement import parse_arrangement
from dops.exact import Poly
from dops.weyl import WeylOp

GOLDEN = Path(__file__).parent / "golden"

WORKED = {
    "xy": "x\ny\n",
    "xy_xpy": "x\ny\nx + y\n",
    "xy_xpy_xmy": "x\ny\nx + y\nx - y\n",
}
GENERIC5 = "x\ny\nx + y\nx - y\nx + 2*y\n"


def arr(text):
    return parse_arrangement(text)


@pytest.fixture(params=sorted(WORKED), scope="session")
def worked(request):
    return arr(WORKED[request.param])


scalars = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_ints = st.integers(min_value=-3, max_value=3).map(Fraction)


@st.composite
def polys(draw, max_deg=3, max_terms=4, coeffs=scalars):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_deg))
        j = draw(st.integers(0, max_deg - i))
        terms[(i, j)] = draw(coeffs)
    return Poly(terms)


@st.composite
def ops(draw, max_order=2, max_deg=2, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        bx = draw(st.integers(0, max_order))
        by = draw(st.integers(0, max_order - bx))
        terms[(bx, by)] = draw(polys(max_deg=max_deg, max_terms=2))
    return WeylOp(terms)


def random_poly(rng, max_deg=4, max_terms=5):
    """Plain-random polynomial for bulk round-trip checks."""
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        i = rng.randint(0, max_deg)
        terms[(i, rng.randint(0, max_deg - i))] = Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3, 7]))
    return Poly(terms)


def random_op(rng, max_order=3):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        bx = rng.randint(0, max_order)
        terms[(bx, rng.randint(0, max_order - bx))] = random_poly(rng, 3, 3)
    return WeylOp(terms)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
