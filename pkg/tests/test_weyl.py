from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import ops, polys
from dops.errors import InvalidArgument, NotIdealPreserving, UndefinedOnZero, UnsupportedCase
from dops.exact import ONE, Poly, X, Y
from dops.text import parse_op
from dops.weyl import (
    DX,
    DY,
    WeylOp,
    conjugate_star,
    const_derivation_power,
    leibniz_expand,
    left_normal_form,
    op_apply,
    op_mul,
    op_order,
    op_totdeg,
    right_normal_form,
    totdeg_components,
    transpose,
)
from oracles import star_identity_holds


def test_commutation_relations():
    x, y = WeylOp.from_poly(X), WeylOp.from_poly(Y)
    assert DX * x - x * DX == WeylOp.from_poly(ONE)
    assert DY * y - y * DY == WeylOp.from_poly(ONE)
    assert DX * y == y * DX
    assert DX * DY == DY * DX


@given(ops(), ops(), ops())
@settings(max_examples=40, deadline=None)
def test_associative(a, b, c):
    assert op_mul(op_mul(a, b), c) == op_mul(a, op_mul(b, c))


@given(ops(), ops(), polys(max_deg=4))
@settings(max_examples=40, deadline=None)
def test_product_is_composition(a, b, f):
    assert op_apply(op_mul(a, b), f) == op_apply(a, op_apply(b, f))


def test_order_and_totdeg():
    theta = parse_op("x^2*y*Dx - Dy^2 + 3")
    assert op_order(theta) == 2
    assert op_totdeg(theta) == 2
    with pytest.raises(UndefinedOnZero):
        op_order(WeylOp())
    with pytest.raises(UndefinedOnZero):
        op_totdeg(WeylOp())


@given(ops(), ops())
@settings(max_examples=40, deadline=None)
def test_totdeg_is_a_grading(a, b):
    prod = op_mul(a, b)
    expected = WeylOp()
    for da, pa in totdeg_components(a):
        for db, pb in totdeg_components(b):
            expected = expected + op_mul(pa, pb)
    assert prod == expected
    for d, piece in totdeg_components(prod):
        assert all(f.homogeneous_part(f.degree) == f for f in piece.terms.values())


@pytest.mark.parametrize("delta", [DX, DX + DY, DY, DX.scale(2) - DY.scale(3)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_leibniz_two_summations(delta, k):
    forms = [X, Y, X + Y][:k]
    for m in range(k, 5):
        a = leibniz_expand(delta, forms, m, summation="subsets")
        b = leibniz_expand(delta, forms, m, summation="permutations")
        prod = ONE
        for f in forms:
            prod = prod * f
        assert a == b == op_mul(const_derivation_power(delta, m), WeylOp.from_poly(prod))


def test_leibniz_errors():
    with pytest.raises(UnsupportedCase):
        leibniz_expand(DX, [X, Y, X], 2)
    with pytest.raises(InvalidArgument):
        leibniz_expand(DX, [X * Y], 2)
    with pytest.raises(InvalidArgument):
        leibniz_expand(WeylOp.from_poly(X) * DX, [Y], 2)


@given(ops(), ops())
@settings(max_examples=40, deadline=None)
def test_transpose_anti_multiplicative(a, b):
    assert transpose(op_mul(a, b)) == op_mul(transpose(b), transpose(a))
    assert transpose(transpose(a)) == a


@given(ops(max_order=3))
@settings(max_examples=40, deadline=None)
def test_right_normal_form_round_trip(a):
    rho = right_normal_form(a)
    assert left_normal_form(rho) == a
    f = X * X * Y + Y + 2
    assert rho.apply(f) == op_apply(a, f)


def test_star_examples():
    Q = X * Y
    assert conjugate_star(parse_op("y*Dy"), Q) == parse_op("-y*Dy")
    assert conjugate_star(parse_op("x*y*Dx"), Q) == parse_op("-x*y*Dx")
    with pytest.raises(NotIdealPreserving):
        conjugate_star(DX, Q)
    with pytest.raises(InvalidArgument):
        conjugate_star(DX, Poly())


@pytest.mark.parametrize(
    "text", ["x*Dx + y*Dy", "x*y*Dx*Dy", "y*Dy^2 + x*Dx", "(x*Dx)^2 - y*Dy + x*y", "x*y*Dx^3"]
)
def test_star_satisfies_defining_identity(text):
    theta = parse_op(text)
    Q = X * Y
    star = conjugate_star(theta, Q)
    assert star_identity_holds(theta, star, Q)
    assert conjugate_star(star, Q) == theta


def test_star_with_repeated_factor():
    h = X * X * Y
    theta = parse_op("x*Dx + y*Dy")
    star = conjugate_star(theta, h, factors=[X, X, Y])
    assert star_identity_holds(theta, star, h)
    with pytest.raises(InvalidArgument):
        conjugate_star(theta, h, factors=[X, Y])


def test_scalars_and_polys_mix():
    assert (DX * Fraction(1, 2)).coeff(1, 0) == Poly.constant(Fraction(1, 2))
    assert (X * DX) == WeylOp({(1, 0): X})
