"""Central line arrangements in the plane and the modules D^(m)(I).

An arrangement is an ordered list of pairwise non-proportional linear
forms p_1, ..., p_r.  Q = p_1 ... p_r defines I = QS, P_i = Q / p_i, and
delta_i is the constant derivation that kills p_i and no other form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import (
    DuplicateHyperplane,
    InternalInconsistency,
    InvalidArgument,
    NotIdealPreserving,
    UnsupportedCase,
)
from .exact import (
    ONE,
    Poly,
    X,
    Y,
    as_scalar,
    determinant,
    divides,
    linear_coefficients,
    monomials_of_degree,
    poly_determinant,
    poly_exact_divide,
    rank,
)
from .weyl import WeylOp, const_derivation_power, op_apply


@dataclass(frozen=True)
class LinearForm:
    """The form a*x + b*y."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_scalar(self.a))
        object.__setattr__(self, "b", as_scalar(self.b))
        if not self.a and not self.b:
            raise InvalidArgument("the zero form does not define a line")

    @classmethod
    def from_poly(cls, p: Poly) -> LinearForm:
        return cls(*linear_coefficients(p))

    @property
    def poly(self) -> Poly:
        return X.scale(self.a) + Y.scale(self.b)

    def proportional_to(self, other: LinearForm) -> bool:
        return self.a * other.b - self.b * other.a == 0

    def __str__(self):
        return str(self.poly)


@dataclass(frozen=True)
class Arrangement:
    forms: tuple
    Q: Poly = field(compare=False, repr=False)
    P: tuple = field(compare=False, repr=False)
    deltas: tuple = field(compare=False, repr=False)

    @property
    def r(self) -> int:
        return len(self.forms)

    @property
    def polys(self):
        return [f.poly for f in self.forms]

    def p(self, i) -> Poly:
        """The i-th form (1-based) as a polynomial."""
        return self.forms[i - 1].poly

    def P_(self, i) -> Poly:
        return self.P[i - 1]

    def delta(self, i) -> WeylOp:
        return self.deltas[i - 1]

    def prefix_product(self, i) -> Poly:
        """p_1 ... p_i (1 for i = 0)."""
        out = ONE
        for f in self.forms[:i]:
            out = out * f.poly
        return out

    def check_index(self, i, allow_zero=False):
        lo = 0 if allow_zero else 1
        if not isinstance(i, int) or not lo <= i <= self.r:
            raise InvalidArgument(f"hyperplane index {i} out of range {lo}..{self.r}")

    def __str__(self):
        return "[" + ", ".join(str(f) for f in self.forms) + "]"


def _delta_for(form: LinearForm) -> WeylOp:
    if form.b == 0:
        # p = a*x
        return WeylOp.d(0, 1)
    # p = b*(y - a_i x) with a_i = -a/b
    a_i = -form.a / form.b
    return WeylOp({(1, 0): ONE, (0, 1): Poly.constant(a_i)})


def new_arrangement(forms) -> Arrangement:
    """Build an arrangement from LinearForms (or degree-one polynomials)."""
    forms = tuple(f if isinstance(f, LinearForm) else LinearForm.from_poly(Poly.coerce(f)) for f in forms)
    if not forms:
        raise InvalidArgument("an arrangement needs at least one line")
    for k, f in enumerate(forms):
        for g in forms[:k]:
            if f.proportional_to(g):
                raise DuplicateHyperplane(f"{g} and {f} define the same line")
    Q = ONE
    for f in forms:
        Q = Q * f.poly
    P = []
    for f in forms:
        q = poly_exact_divide(Q, f.poly)
        if q is None or q * f.poly != Q:
            raise InternalInconsistency("Q is not divisible by its own factor")
        P.append(q)
    deltas = tuple(_delta_for(f) for f in forms)
    for i, d in enumerate(deltas):
        for j, f in enumerate(forms):
            if (op_apply(d, f.poly).is_zero()) != (i == j):
                raise InternalInconsistency(f"delta_{i + 1} misbehaves on p_{j + 1}")
    return Arrangement(forms, Q, tuple(P), deltas)


def parse_arrangement(text: str) -> Arrangement:
    """Read the line-oriented arrangement format: one linear form per line,
    ``#`` starts a comment, blank lines are skipped."""
    from .text import parse_poly

    forms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        p = parse_poly(line, line=lineno)
        try:
            forms.append(LinearForm.from_poly(p))
        except InvalidArgument as exc:
            raise InvalidArgument(f"line {lineno}: {exc}") from None
    return new_arrangement(forms)


def load_arrangement(path) -> Arrangement:
    with open(path, encoding="utf-8") as fh:
        return parse_arrangement(fh.read())


def euler_op(m: int) -> WeylOp:
    """sum over |alpha| = m of m!/alpha! x^alpha D^alpha."""
    if m < 0:
        raise InvalidArgument("Euler operators are indexed by m >= 0")
    terms = {}
    for i in range(m + 1):
        j = m - i
        c = factorial(m) // (factorial(i) * factorial(j))
        terms[(i, j)] = Poly.monomial(i, j, c)
    return WeylOp(terms)


# -- ideal membership ------------------------------------------------------------


def in_ideal(f: Poly, gens) -> bool:
    """Membership of f in the ideal generated by gens.

    Principal ideals use exact division.  Several generators are supported
    when they are all homogeneous, by linear algebra degree by degree.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise InvalidArgument("the ideal needs a nonzero generator")
    if f.is_zero():
        return True
    if len(gens) == 1:
        return divides(gens[0], f)
    if not all(g.is_homogeneous() for g in gens):
        raise UnsupportedCase("non-principal membership needs homogeneous generators")
    for d in sorted({i + j for i, j in f.terms}):
        piece = f.homogeneous_part(d)
        spanning = []
        for g in gens:
            e = d - g.degree
            for (a, b) in monomials_of_degree(e):
                spanning.append(g.shift(a, b))
        monos = monomials_of_degree(d)
        rows = [[s.coeff(*mn) for s in spanning] for mn in monos]
        target = [piece.coeff(*mn) for mn in monos]
        if not spanning:
            return False
        if rank(rows) != rank([row + [t] for row, t in zip(rows, target)]):
            return False
    return True


def preserves_ideal(theta: WeylOp, gens) -> bool:
    """Whether theta maps the ideal <gens> into itself.

    Uses the finite test: theta(x^alpha f_j) in the ideal for |alpha| < order.
    """
    gens = [Poly.coerce(g) for g in gens]
    if not gens or all(g.is_zero() for g in gens):
        raise InvalidArgument("preserves_ideal needs a nonzero generator")
    if theta.is_zero() or theta.order == 0:
        return True
    m = theta.order
    for g in gens:
        if g.is_zero():
            continue
        for k in range(m):
            for a, b in monomials_of_degree(k):
                if not in_ideal(op_apply(theta, g.shift(a, b)), gens):
                    return False
    return True


def in_DI(theta: WeylOp, A: Arrangement, method: str = "both") -> bool:
    """Whether theta preserves I = QS.

    ``method="direct"`` tests the ideal QS itself; ``"intersection"`` tests
    each p_i S separately; ``"both"`` runs both and insists they agree.
    """
    if method == "direct":
        return preserves_ideal(theta, [A.Q])
    if method == "intersection":
        return all(preserves_ideal(theta, [p]) for p in A.polys)
    if method != "both":
        raise InvalidArgument(f"unknown method {method!r}")
    direct = preserves_ideal(theta, [A.Q])
    inter = all(preserves_ideal(theta, [p]) for p in A.polys)
    if direct != inter:
        raise InternalInconsistency("membership in D(I) differs between the two tests")
    return direct


def split_homogeneous(theta: WeylOp, A: Arrangement):
    """Split theta in D(I) into its homogeneous pieces by order."""
    if not in_DI(theta, A):
        raise NotIdealPreserving("operator does not preserve I")
    out = []
    for m in theta.orders():
        comp = theta.order_component(m)
        if not in_DI(comp, A):
            raise InternalInconsistency(f"order {m} component left D(I)")
        out.append((m, comp))
    return out


# -- free S-bases of D^(m)(I) ----------------------------------------------------


@dataclass(frozen=True)
class BasisElement:
    kind: str  # "euler", "pdelta" or "qeta"
    index: int  # hyperplane index for pdelta, eta position for qeta, 0 for euler
    op: WeylOp
    order: int
    symbol: tuple = ()  # for qeta: the chosen monomial (bx, by) of eta

    @property
    def label(self) -> str:
        if self.kind == "euler":
            return f"eps{self.order}"
        if self.kind == "pdelta":
            return f"P{self.index}*delta{self.index}^{self.order}"
        bx, by = self.symbol
        return f"Q*eta{self.index}[Dx^{bx}*Dy^{by}]"

    @property
    def poly_degree(self) -> int:
        return self.op.poly_degree


def _symbol_vector(op: WeylOp, m: int):
    """Coefficients of a constant-coefficient order-m operator on Dx^(m-t) Dy^t."""
    return [op.coeff(m - t, t).constant_term() for t in range(m + 1)]


def eta_completion(A: Arrangement, m: int):
    """Monomials D^beta completing {delta_1^m, ..., delta_r^m} to a basis of
    the order-m constant symbols.

    Candidates Dx^(m-j+1) Dy^(j-1) are scanned for j = r+1, ..., m+1 and then
    j = 1, ..., r, keeping each one that raises the rank.
    """
    r = A.r
    if m <= r - 1:
        return []
    vecs = [_symbol_vector(const_derivation_power(d, m), m) for d in A.deltas]
    if rank(vecs) != r:
        raise InternalInconsistency("delta_i^m are linearly dependent")
    chosen = []
    order = list(range(r + 1, m + 2)) + list(range(1, r + 1))
    for j in order:
        if len(chosen) == m + 1 - r:
            break
        beta = (m - j + 1, j - 1)
        v = [Fraction(1) if t == j - 1 else Fraction(0) for t in range(m + 1)]
        if rank(vecs + [v]) > len(vecs):
            vecs.append(v)
            chosen.append(beta)
    if len(chosen) != m + 1 - r:
        raise InternalInconsistency("could not complete the symbol basis")
    return chosen


def symbol_matrix(ops, m):
    """Polynomial coefficient matrix of order-m operators against Dx^(m-t) Dy^t."""
    return [[op.coeff(m - t, t) for t in range(m + 1)] for op in ops]


_PROBE_POINTS = [(1, 2), (3, -1), (2, 5), (-4, 7), (5, 3), (7, -2)]


def s_independent(ops, m) -> bool:
    """Whether m+1 operators of pure order m are independent over S.

    Equivalent to a nonzero determinant of the symbol matrix.  Point
    evaluations settle the common case; the exact polynomial determinant is
    the fallback.
    """
    M = symbol_matrix(ops, m)
    if len(M) != m + 1:
        raise InvalidArgument("need exactly m+1 operators")
    for x0, y0 in _PROBE_POINTS:
        if determinant([[f.evaluate(x0, y0) for f in row] for row in M]) != 0:
            return True
    return not poly_determinant(M).is_zero()


def basis_Dm(A: Arrangement, m: int):
    """Free S-basis of D^(m)(I), m >= 1, in the three order regimes."""
    if not isinstance(m, int) or m < 1:
        raise InvalidArgument("basis_Dm needs m >= 1")
    return list(_basis_cached(A, m))


@lru_cache(maxsize=None)
def _basis_cached(A: Arrangement, m: int):
    r = A.r
    elems = []
    if m < r - 1:
        elems.append(BasisElement("euler", 0, euler_op(m), m))
        for i in range(1, m + 1):
            elems.append(_pdelta(A, i, m))
    else:
        for i in range(1, r + 1):
            elems.append(_pdelta(A, i, m))
        for pos, beta in enumerate(eta_completion(A, m), start=r + 1):
            elems.append(BasisElement("qeta", pos, WeylOp.d(*beta, coeff=A.Q), m, beta))
    if len(elems) != m + 1:
        raise InternalInconsistency("basis has the wrong size")
    for e in elems:
        if not in_DI(e.op, A):
            raise InternalInconsistency(f"basis element {e.label} does not preserve I")
    if not s_independent([e.op for e in elems], m):
        raise InternalInconsistency("basis elements are dependent over S")
    return tuple(elems)


def _pdelta(A: Arrangement, i: int, m: int) -> BasisElement:
    op = const_derivation_power(A.delta(i), m).left_mul_poly(A.P_(i))
    return BasisElement("pdelta", i, op, m)


def pdelta_op(A: Arrangement, i: int, m: int) -> WeylOp:
    """P_i * delta_i^m."""
    return const_derivation_power(A.delta(i), m).left_mul_poly(A.P_(i))


def decompose(theta: WeylOp, A: Arrangement, m: int):
    """Coefficients c_B in S with theta = sum c_B * B over basis_Dm(A, m).

    theta must be homogeneous of order m and lie in D(I).  The system is
    solved separately in each polynomial degree of the coefficients.
    """
    from .exact import solve_linear

    basis = basis_Dm(A, m)
    if theta.is_zero():
        return [(b, Poly()) for b in basis]
    if theta.orders() != [m]:
        raise InvalidArgument(
            f"operator is not homogeneous of order {m}; split it with split_homogeneous first"
        )
    if not in_DI(theta, A):
        raise NotIdealPreserving("operator does not preserve I")
    betas = [(m - t, t) for t in range(m + 1)]
    degrees = sorted({i + j for f in theta.terms.values() for i, j in f.terms})
    coeffs = [Poly() for _ in basis]
    for D in degrees:
        columns = []
        for k, b in enumerate(basis):
            e = D - b.poly_degree
            for mono in monomials_of_degree(e):
                columns.append((k, mono))
        rows_index = [(beta, mono) for beta in betas for mono in monomials_of_degree(D)]
        col_vecs = []
        for k, (a, bb) in columns:
            op = basis[k].op
            col_vecs.append([op.coeff(*beta).shift(a, bb).coeff(*mono) for beta, mono in rows_index])
        rows = [[cv[r] for cv in col_vecs] for r in range(len(rows_index))]
        target = [theta.coeff(*beta).coeff(*mono) for beta, mono in rows_index]
        sol = solve_linear(rows, target, ncols=len(columns))
        if sol is None:
            raise InternalInconsistency(f"no decomposition in degree {D}")
        for (k, mono), v in zip(columns, sol):
            if v:
                coeffs[k] = coeffs[k] + Poly.monomial(*mono, v)
    recombined = WeylOp()
    for c, b in zip(coeffs, basis):
        recombined = recombined + b.op.left_mul_poly(c)
    if recombined != theta:
        raise InternalInconsistency("decomposition does not recombine")
    return list(zip(basis, coeffs))
