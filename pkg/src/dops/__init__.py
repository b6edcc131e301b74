"""Exact computations with rings of differential operators that preserve the
defining ideal of a central line arrangement in the plane."""

from .arrangement import (
    Arrangement,
    BasisElement,
    LinearForm,
    basis_Dm,
    decompose,
    euler_op,
    in_DI,
    load_arrangement,
    new_arrangement,
    parse_arrangement,
)
from .chain import (
    EiElement,
    ExpPoint,
    GrClass,
    basis_Lim,
    c_coeffs,
    d_coeffs,
    exp_of,
    gr_mul,
    gr_not_fg_witness,
    in_Li,
    project_Ei,
    right_mul_Ei,
    staircase_closure_check,
)
from .errors import (
    DopsError,
    DuplicateHyperplane,
    InternalInconsistency,
    InvalidArgument,
    NotIdealPreserving,
    NotRepresentable,
    ParseError,
    TheoryViolation,
    UndefinedOnZero,
    UnsupportedCase,
)
from .exact import Poly, RatFunc
from .text import format_op, format_poly, parse_op, parse_poly
from .weyl import (
    DX,
    DY,
    WeylOp,
    conjugate_star,
    leibniz_expand,
    op_apply,
    op_mul,
    op_order,
    op_totdeg,
    transpose,
)

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BasisElement",
    "DX",
    "DY",
    "DopsError",
    "DuplicateHyperplane",
    "EiElement",
    "ExpPoint",
    "GrClass",
    "InternalInconsistency",
    "InvalidArgument",
    "LinearForm",
    "NotIdealPreserving",
    "NotRepresentable",
    "ParseError",
    "Poly",
    "RatFunc",
    "TheoryViolation",
    "UndefinedOnZero",
    "UnsupportedCase",
    "WeylOp",
    "basis_Dm",
    "basis_Lim",
    "c_coeffs",
    "conjugate_star",
    "d_coeffs",
    "decompose",
    "euler_op",
    "exp_of",
    "format_op",
    "format_poly",
    "gr_mul",
    "gr_not_fg_witness",
    "in_DI",
    "in_Li",
    "leibniz_expand",
    "load_arrangement",
    "new_arrangement",
    "op_apply",
    "op_mul",
    "op_order",
    "op_totdeg",
    "parse_arrangement",
    "parse_op",
    "parse_poly",
    "project_Ei",
    "right_mul_Ei",
    "staircase_closure_check",
    "transpose",
]
