from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polys
from dops.errors import InvalidArgument
from dops.exact import (
    ONE,
    Poly,
    RatFunc,
    X,
    Y,
    as_scalar,
    determinant,
    divides,
    falling_factorial,
    homogeneous_components,
    infeasibility_witness,
    linear_factors,
    mat_vec,
    nullspace,
    poly_determinant,
    poly_divmod,
    poly_exact_divide,
    rank,
    solve_linear,
)

F = Fraction


def test_floats_are_rejected():
    with pytest.raises(InvalidArgument):
        as_scalar(0.5)
    assert as_scalar("3/4") == F(3, 4)


def test_zero_coefficients_dropped():
    p = Poly({(1, 0): 0, (0, 1): 2})
    assert p.terms == {(0, 1): F(2)}
    assert Poly() == Poly({(3, 3): 0})
    assert Poly().degree == -1


def test_items_are_graded_lex():
    p = X * X + X * Y + Y * Y + X + ONE
    assert [m for m, _ in p.items()] == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 0)]


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f - f == Poly()


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_division_identity(f, g):
    if g.is_zero():
        return
    q, r = poly_divmod(f, g)
    assert q * g + r == f
    lm = g.leading_monomial()
    assert all(not (i >= lm[0] and j >= lm[1]) for i, j in r.terms)
    assert poly_exact_divide(f * g, g) == f


def test_divides():
    assert divides(X, X * Y + X)
    assert not divides(X, X + Y)
    with pytest.raises(InvalidArgument):
        poly_exact_divide(X, Poly())


@given(polys(max_deg=4))
@settings(max_examples=40, deadline=None)
def test_derivative_product_rule(f):
    g = X * Y + Y
    assert (f * g).diff("x") == f.diff("x") * g + f * g.diff("x")


def test_homogeneous_components_sum_back():
    f = X * X * Y + X + 3
    parts = homogeneous_components(f)
    assert [d for d, _ in parts] == [0, 1, 3]
    total = Poly()
    for _, p in parts:
        total = total + p
    assert total == f


def test_falling_factorial():
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(2, 3) == 0
    with pytest.raises(InvalidArgument):
        falling_factorial(3, -1)


def test_linear_factors_round_trip():
    h = X * Y * (X + Y) * (X - Y.scale(2))
    c, forms = linear_factors(h)
    prod = Poly.constant(c)
    for f in forms:
        prod = prod * f
    assert prod == h
    assert len(forms) == 4


def test_linear_factors_refuses_irreducible():
    with pytest.raises(InvalidArgument):
        linear_factors(X * X + Y * Y)
    with pytest.raises(InvalidArgument):
        linear_factors(X + ONE)


def test_ratfunc_cancels_and_differentiates():
    q = RatFunc(X * Y, [X], (1,))
    assert q.is_polynomial() and q.to_poly() == Y
    inv = RatFunc(ONE, [X], (1,))
    d = inv.diff("x")  # -1/x^2
    assert (d * (X * X)).to_poly() == Poly.constant(-1)


def test_solve_and_witness():
    A = [[F(1), F(1)], [F(2), F(2)]]
    assert solve_linear(A, [F(1), F(3)]) is None
    w = infeasibility_witness(A, [F(1), F(3)], 2)
    assert all(sum(w[k] * A[k][c] for k in range(2)) == 0 for c in range(2))
    assert w[0] * 1 + w[1] * 3 != 0
    x = solve_linear(A, [F(1), F(2)])
    assert mat_vec(A, x) == [F(1), F(2)]
    assert infeasibility_witness(A, [F(1), F(2)], 2) is None


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_rank_nullity(rows):
    A = [[F(v) for v in r] for r in rows]
    ns = nullspace(A, 3)
    assert rank(A, 3) + len(ns) == 3
    for v in ns:
        assert all(c == 0 for c in mat_vec(A, v))


def test_determinants_agree():
    A = [[F(2), F(1)], [F(1), F(3)]]
    assert determinant(A) == 5
    P = [[X, Y], [Y, X]]
    assert poly_determinant(P) == X * X - Y * Y
