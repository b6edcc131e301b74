import random

import pytest

from conftest import GENERIC5, WORKED, arr
from dops.arrangement import (
    LinearForm,
    basis_Dm,
    decompose,
    euler_op,
    in_DI,
    in_ideal,
    parse_arrangement,
    preserves_ideal,
    split_homogeneous,
)
from dops.errors import (
    DuplicateHyperplane,
    InvalidArgument,
    NotIdealPreserving,
    ParseError,
    UnsupportedCase,
)
from dops.exact import Poly, X, Y
from dops.text import format_op, parse_op
from dops.weyl import DX, DY, WeylOp, op_apply
from oracles import ansatz_piece, falling_euler, preserves_by_definition, same_span, span_piece


def test_linear_form_ingestion():
    A = parse_arrangement("# two lines\ny - 2*x\n\nx  # second\n")
    assert A.forms[0] == LinearForm(-2, 1)
    assert A.r == 2
    assert A.Q == (Y - X.scale(2)) * X


def test_rejects_bad_input():
    with pytest.raises(DuplicateHyperplane):
        parse_arrangement("x\n2*x\n")
    with pytest.raises(InvalidArgument):
        parse_arrangement("x + 1\n")
    with pytest.raises(InvalidArgument):
        parse_arrangement("x*y\n")
    with pytest.raises(ParseError) as info:
        parse_arrangement("x\ny +\n")
    assert info.value.line == 2
    with pytest.raises(InvalidArgument):
        LinearForm(0, 0)


def test_deltas_kill_exactly_their_form():
    A = arr(GENERIC5)
    for i in range(1, A.r + 1):
        for j in range(1, A.r + 1):
            image = op_apply(A.delta(i), A.p(j))
            assert image.is_zero() == (i == j)
        assert A.p(i) * A.P_(i) == A.Q


@pytest.mark.parametrize("m", range(1, 7))
def test_euler_is_falling_product(m):
    assert euler_op(m) == falling_euler(m)


def test_euler_text():
    assert format_op(euler_op(2)) == "x^2*Dx^2 + 2*x*y*Dx*Dy + y^2*Dy^2"


def test_membership_examples():
    A = arr(WORKED["xy"])
    assert in_DI(parse_op("y*Dy"), A)
    assert in_DI(parse_op("x*Dx + y*Dy"), A)
    assert not in_DI(DX, A)
    assert in_DI(WeylOp.from_poly(X + 1), A)
    assert in_DI(parse_op("x*y*Dx^5"), A)


def test_in_ideal_multi_generator():
    assert in_ideal(X * X * Y + Y * Y * Y, [X * X, Y])
    assert not in_ideal(X, [X * X, Y])
    with pytest.raises(UnsupportedCase):
        in_ideal(X, [X + 1, Y])
    assert preserves_ideal(parse_op("x*Dx + y*Dy"), [X * X, Y])
    assert not preserves_ideal(DY, [X * X, Y])


@pytest.mark.parametrize("name", sorted(WORKED) + ["generic5"])
@pytest.mark.parametrize("m", range(1, 7))
def test_basis_shape(name, m):
    A = arr(WORKED.get(name, GENERIC5))
    basis = basis_Dm(A, m)
    assert len(basis) == m + 1
    for b in basis:
        assert b.op.orders() == [m]
        assert preserves_by_definition(b.op, A.Q)


def test_basis_examples():
    A = arr(WORKED["xy"])
    assert [format_op(b.op) for b in basis_Dm(A, 1)] == ["y*Dy", "x*Dx"]
    assert [format_op(b.op) for b in basis_Dm(A, 2)] == ["y*Dy^2", "x*Dx^2", "x*y*Dx*Dy"]
    A4 = arr(WORKED["xy_xpy_xmy"])
    labels = [b.label for b in basis_Dm(A4, 1)]
    assert labels == ["eps1", "P1*delta1^1"]
    with pytest.raises(InvalidArgument):
        basis_Dm(A, 0)


@pytest.mark.parametrize("m", [1, 2])
def test_basis_matches_brute_force(m):
    A = arr(WORKED["xy"])
    ops = [b.op for b in basis_Dm(A, m)]
    for d in range(0, 5):
        _, oracle = ansatz_piece(1, 1, m, d)
        assert same_span(oracle, span_piece(ops, m, d)), d


def _random_member(A, m, rng):
    total = WeylOp()
    for b in basis_Dm(A, m):
        c = Poly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3)})
        total = total + b.op.left_mul_poly(c)
    return total


@pytest.mark.parametrize("name", sorted(WORKED))
def test_decompose_recovers_coefficients(name):
    A = arr(WORKED[name])
    rng = random.Random(7)
    for m in (1, 2, 3):
        basis = basis_Dm(A, m)
        coeffs = [Poly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3)}) for _ in basis]
        theta = WeylOp()
        for b, c in zip(basis, coeffs):
            theta = theta + b.op.left_mul_poly(c)
        got = decompose(theta, A, m)
        assert [c for _, c in got] == coeffs


def test_decompose_errors():
    A = arr(WORKED["xy"])
    with pytest.raises(NotIdealPreserving):
        decompose(DX, A, 1)
    with pytest.raises(InvalidArgument):
        decompose(parse_op("y*Dy + y*Dy^2"), A, 1)


def test_split_homogeneous_pieces_are_members():
    A = arr(WORKED["xy_xpy"])
    rng = random.Random(3)
    theta = _random_member(A, 1, rng) + _random_member(A, 3, rng) + WeylOp.from_poly(X)
    pieces = split_homogeneous(theta, A)
    assert [m for m, _ in pieces] == [0, 1, 3]
    assert all(in_DI(p, A) for _, p in pieces)
    with pytest.raises(NotIdealPreserving):
        split_homogeneous(DY, A)


def test_intersection_path_agrees_with_definition():
    A = arr(WORKED["xy_xpy"])
    rng = random.Random(11)
    for _ in range(60):
        theta = _random_member(A, rng.randint(1, 3), rng)
        if rng.random() < 0.5:
            theta = theta + WeylOp.d(rng.randint(0, 2), rng.randint(0, 1), Poly({(rng.randint(0, 2), 0): 1}))
        expect = preserves_by_definition(theta, A.Q)
        assert in_DI(theta, A, method="direct") == expect
        assert in_DI(theta, A, method="intersection") == expect
