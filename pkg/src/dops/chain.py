"""The ideal chain L_r <= ... <= L_0 = D(I), the modules E_i with their
exponent staircases, and the order-graded ring Gr.

For each hyperplane i the quotient S/p_iS is a polynomial ring in one
generator variable g: ``y`` when p_i involves x (then x = c*y mod p_i), and
``x`` when p_i is a multiple of y.  Elements of E_i are stored as
``{(alpha, m): c}`` meaning ``sum c * g^alpha * [P_i delta_i^m]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .arrangement import (
    Arrangement,
    basis_Dm,
    eta_completion,
    in_DI,
    pdelta_op,
)
from .errors import (
    InternalInconsistency,
    InvalidArgument,
    NotIdealPreserving,
    NotRepresentable,
    TheoryViolation,
    UndefinedOnZero,
    UnsupportedCase,
)
from .exact import (
    ONE,
    Poly,
    X,
    Y,
    as_scalar,
    divides,
    falling_factorial,
    grlex_key,
    infeasibility_witness,
    monomials_of_degree,
    poly_exact_divide,
    poly_rem,
    solve_linear,
)
from .weyl import WeylOp, const_derivation_power, leibniz_expand, op_mul


# -- the chain L_i ------------------------------------------------------------------


def in_Li(theta: WeylOp, A: Arrangement, i: int) -> bool:
    """Membership in L_i = D(I) intersected with (p_1 ... p_i) D(S)."""
    A.check_index(i, allow_zero=True)
    if not in_DI(theta, A):
        return False
    pi = A.prefix_product(i)
    return all(divides(pi, f) for f in theta.terms.values())


def basis_Lim(A: Arrangement, i: int, m: int):
    """S-basis of L_i^(m) for m >= r - 1.

    Q delta_1^m, ..., Q delta_i^m, P_(i+1) delta_(i+1)^m, ..., P_r delta_r^m,
    followed by Q eta_j^(m) with the same eta choice as :func:`basis_Dm`.
    """
    A.check_index(i, allow_zero=True)
    r = A.r
    if m < r - 1 or m < 0:
        raise UnsupportedCase(f"closed basis of L_i^(m) needs m >= r-1 = {r - 1}")
    gens = []
    for j in range(1, r + 1):
        dm = const_derivation_power(A.delta(j), m)
        gens.append(dm.left_mul_poly(A.Q if j <= i else A.P_(j)))
    for beta in eta_completion(A, m):
        gens.append(WeylOp.d(*beta, coeff=A.Q))
    for g in gens:
        if not in_Li(g, A, i):
            raise InternalInconsistency(f"generator {g} is not in L_{i}")
    return gens


# -- E_i ---------------------------------------------------------------------------


def generator_var(A: Arrangement, i: int) -> str:
    return "y" if A.forms[i - 1].a != 0 else "x"


def reduce_mod_form(f: Poly, A: Arrangement, i: int) -> dict:
    """Image of f in S/p_iS = Q[g], as {power: coefficient}."""
    form = A.forms[i - 1]
    if form.a != 0:
        image = f.substitute(Y.scale(-form.b / form.a), Y)
        return {j: c for (_, j), c in image.terms.items()}
    image = f.substitute(X, Poly())
    return {k: c for (k, _), c in image.terms.items()}


def _gen_power(var, alpha) -> Poly:
    return Poly.monomial(alpha, 0) if var == "x" else Poly.monomial(0, alpha)


class EiElement:
    """Element of E_i: sum of c * g^alpha * [P_i delta_i^m] over keys (alpha, m)."""

    __slots__ = ("i", "gen_var", "_coeffs")

    def __init__(self, i, gen_var, coeffs=None):
        self.i = i
        self.gen_var = gen_var
        self._coeffs = {}
        for key, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c:
                self._coeffs[(int(key[0]), int(key[1]))] = c

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, EiElement):
            return NotImplemented
        return (self.i, self.gen_var, self._coeffs) == (other.i, other.gen_var, other._coeffs)

    def __hash__(self):
        return hash((self.i, self.gen_var, frozenset(self._coeffs.items())))

    def _same_space(self, other):
        if (self.i, self.gen_var) != (other.i, other.gen_var):
            raise InvalidArgument("elements of different modules E_i")

    def __add__(self, other):
        self._same_space(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return EiElement(self.i, self.gen_var, out)

    def __neg__(self):
        return EiElement(self.i, self.gen_var, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_scalar(c)
        return EiElement(self.i, self.gen_var, {k: v * c for k, v in self._coeffs.items()})

    def items(self):
        """Terms ordered by descending exponent."""
        return sorted(self._coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]), reverse=True)

    def representative(self, A: Arrangement) -> WeylOp:
        out = WeylOp()
        for (alpha, m), c in self._coeffs.items():
            out = out + pdelta_op(A, self.i, m).left_mul_poly(_gen_power(self.gen_var, alpha).scale(c))
        return out

    def __str__(self):
        if not self._coeffs:
            return "0"
        g = self.gen_var
        parts = []
        for k, ((alpha, m), c) in enumerate(self.items()):
            mono = f"{g}^{alpha}*" if alpha > 1 else (f"{g}*" if alpha == 1 else "")
            body = f"{mono}[P{self.i}*delta{self.i}^{m}]"
            a = abs(c)
            if a != 1:
                body = f"{a}*{body}"
            sign = ("-" if c < 0 else "") if k == 0 else (" - " if c < 0 else " + ")
            parts.append(sign + body)
        return "".join(parts)

    def __repr__(self):
        return f"EiElement(i={self.i}, {self})"


def _pdelta_coefficient(theta_m: WeylOp, A: Arrangement, i: int, m: int) -> dict:
    """f mod p_i (as {power: c}) such that theta_m - f P_i delta_i^m lies in L_i^(m)."""
    dm = const_derivation_power(A.delta(i), m)
    beta0 = max(dm.terms, key=grlex_key)
    w0 = dm.coeff(*beta0).constant_term()
    pi_prev = A.prefix_product(i - 1)
    u = poly_exact_divide(theta_m.coeff(*beta0), pi_prev)
    if u is None:
        raise NotRepresentable(f"order {m} part is not in S*P_{i}*delta_{i}^{m} + L_{i}")
    tail = ONE
    for f in A.forms[i:]:
        tail = tail * f.poly
    tail_red = reduce_mod_form(tail, A, i)
    shift = A.r - i
    if set(tail_red) != {shift}:
        raise InternalInconsistency("product of the later forms did not reduce to a monomial")
    denom = tail_red[shift] * w0
    fbar = {}
    for power, c in reduce_mod_form(u, A, i).items():
        if power < shift:
            raise NotRepresentable(f"order {m} part is not in S*P_{i}*delta_{i}^{m} + L_{i}")
        fbar[power - shift] = c / denom
    var = generator_var(A, i)
    lift = Poly()
    for alpha, c in fbar.items():
        lift = lift + _gen_power(var, alpha).scale(c)
    rest = theta_m - pdelta_op(A, i, m).left_mul_poly(lift)
    if not rest.is_zero() and not in_Li(rest, A, i):
        raise NotRepresentable(f"order {m} part is not in S*P_{i}*delta_{i}^{m} + L_{i}")
    return fbar


def project_Ei(theta: WeylOp, A: Arrangement, i: int) -> EiElement:
    """Class in E_i of an operator in the sum over m of S P_i delta_i^m + L_i^(m)."""
    A.check_index(i)
    coeffs = {}
    for m in theta.orders():
        for alpha, c in _pdelta_coefficient(theta.order_component(m), A, i, m).items():
            coeffs[(alpha, m)] = c
    return EiElement(i, generator_var(A, i), coeffs)


def ei_monomial(A: Arrangement, i: int, alpha: int, m: int, c=1) -> EiElement:
    return EiElement(i, generator_var(A, i), {(alpha, m): c})


@total_ordering
@dataclass(frozen=True)
class ExpPoint:
    """Staircase point (k, m); ordered by m first, then k."""

    k: int
    m: int

    def __lt__(self, other):
        if not isinstance(other, ExpPoint):
            return NotImplemented
        return (self.m, self.k) < (other.m, other.k)

    def __str__(self):
        return f"({self.k}, {self.m})"


def exp_of(e: EiElement, r: int) -> ExpPoint:
    if e.is_zero():
        raise UndefinedOnZero("the exponent of zero is undefined")
    return max(ExpPoint(alpha + r - 1, m) for alpha, m in e.coeffs)


def staircase_closure_check(points, r: int, bound: int) -> bool:
    """Whether the point set is closed, inside the box [0, bound]^2, under
    (k, m) -> (k + a, m) for a >= 0 and (k, m) -> (k + b, m + m') for
    b >= r - 1, m' >= 1."""
    pts = {(p.k, p.m) if isinstance(p, ExpPoint) else tuple(p) for p in points}
    for k, m in pts:
        for k2 in range(k, bound + 1):
            if (k2, m) not in pts:
                return False
        for m2 in range(m + 1, bound + 1):
            for k2 in range(k + max(r - 1, 0), bound + 1):
                if (k2, m2) not in pts:
                    return False
    return True


def right_act_Ei(e: EiElement, A: Arrangement, lam: WeylOp) -> EiElement:
    """e * lam for lam in D(I), computed on a representative and projected back."""
    return project_Ei(op_mul(e.representative(A), lam), A, e.i)


def right_mul_Ei(e: EiElement, A: Arrangement, i: int, m_prime: int) -> EiElement:
    """e * P_i delta_i^m'."""
    if m_prime < 1:
        raise InvalidArgument("m' must be at least 1")
    if e.i != i:
        raise InvalidArgument("element lives in a different E_i")
    return right_act_Ei(e, A, pdelta_op(A, i, m_prime))


def sample_module_exps(generators, A: Arrangement, i: int, bound: int):
    """Exponents of products of the generators with g^a and with
    q^(b-r+1) * P_i delta_i^m', inside the box [0, bound]^2.

    q is p_j for the first j != i (the generator variable when r = 1).
    """
    r = A.r
    others = [j for j in range(1, r + 1) if j != i]
    q = A.p(others[0]) if others else _gen_power(generator_var(A, i), 1)
    var = generator_var(A, i)
    points = set()
    for gen in generators:
        k0, m0 = (lambda p: (p.k, p.m))(exp_of(gen, r))
        rep = gen.representative(A)
        for a in range(0, bound - k0 + 1):
            e = project_Ei(op_mul(rep, WeylOp.from_poly(_gen_power(var, a))), A, i)
            points.add(exp_of(e, r))
        for mp in range(1, bound - m0 + 1):
            for b in range(max(r - 1, 0), bound - k0 + 1):
                lam = pdelta_op(A, i, mp).left_mul_poly(q ** (b - r + 1))
                e = project_Ei(op_mul(rep, lam), A, i)
                points.add(exp_of(e, r))
    return {p for p in points if p.k <= bound and p.m <= bound}


# -- coefficient formulas ------------------------------------------------------------


def d_coeffs(A: Arrangement, i: int, m: int, ell: int):
    """(d_0, ..., d_(r-1)) with delta_i^(m-ell) P_i congruent, modulo p_i D(S), to
    sum [m-ell]_l' d_l' g^(r-1-l') delta_i^(m-ell-l')."""
    A.check_index(i)
    r = A.r
    n = m - ell
    if n < r - 1:
        raise InvalidArgument(f"need m - ell >= r - 1, got {n}")
    others = [A.p(j) for j in range(1, r + 1) if j != i]
    expanded = leibniz_expand(A.delta(i), others, n)
    d = []
    for lp in range(r):
        power = const_derivation_power(A.delta(i), n - lp)
        beta0 = max(power.terms, key=grlex_key)
        w0 = power.coeff(*beta0).constant_term()
        comp = expanded.order_component(n - lp)
        coef = comp.coeff(*beta0).scale(1 / w0)
        if comp != power.left_mul_poly(coef):
            raise InternalInconsistency(f"order {n - lp} part is not a multiple of delta_{i}^{n - lp}")
        red = reduce_mod_form(coef, A, i)
        if set(red) - {r - 1 - lp}:
            raise InternalInconsistency("reduction modulo p_i left a mixed residue")
        d.append(red.get(r - 1 - lp, Fraction(0)) / falling_factorial(n, lp))
    if d[0] == 0 or d[-1] == 0:
        raise TheoryViolation("d_0 and d_(r-1) must be nonzero")
    return d


def c_coeffs(a, d, m: int, s: int):
    """c_t = sum over l + l' = t of a_l [m-l]_l' d_l', for t = 0..s."""
    a = [as_scalar(v) for v in a]
    d = [as_scalar(v) for v in d]
    r = len(d)
    if s < r - 1:
        raise InvalidArgument("need s >= r - 1")
    if len(a) != s - r + 2:
        raise InvalidArgument(f"expected {s - r + 2} a-coefficients, got {len(a)}")
    if a[0] != 1:
        raise InvalidArgument("a_0 must be normalized to 1")
    c = [Fraction(0)] * (s + 1)
    for ell, av in enumerate(a):
        for lp, dv in enumerate(d):
            c[ell + lp] += av * falling_factorial(m - ell, lp) * dv
    return c


def theta_element(A: Arrangement, i: int, a, m: int, s: int) -> EiElement:
    """sum over l of a_l g^(s-r+1-l) [P_i delta_i^(m-l)], exponent (s, m)."""
    r = A.r
    if m < s:
        raise InvalidArgument("need m >= s")
    coeffs = {(s - r + 1 - ell, m - ell): av for ell, av in enumerate(a)}
    return EiElement(i, generator_var(A, i), coeffs)


def pthe_closed_form(A: Arrangement, i: int, a, m: int, s: int, m_prime: int) -> EiElement:
    """Closed form of theta_m * P_i delta_i^m' as sum c_t g^(s-t) [P_i delta_i^(m+m'-t)]."""
    d = d_coeffs(A, i, m, 0) if A.r > 0 else [Fraction(1)]
    c = c_coeffs(a, d, m, s)
    coeffs = {(s - t, m + m_prime - t): ct for t, ct in enumerate(c)}
    return EiElement(i, generator_var(A, i), coeffs)


# -- the order-graded ring -------------------------------------------------------------


@dataclass(frozen=True)
class GrClass:
    """Class of a homogeneous order-m operator of D(I) modulo Q D^(m)(S).

    ``rep`` is kept canonical: every coefficient is reduced modulo Q.
    """

    m: int
    rep: WeylOp

    def __str__(self):
        return f"[{self.rep}]_{self.m}"


def gr_class(theta: WeylOp, A: Arrangement, m: int = None) -> GrClass:
    if m is None:
        if theta.is_zero():
            raise InvalidArgument("give the order of a zero class explicitly")
        m = theta.order
    if not theta.is_zero() and theta.orders() != [m]:
        raise InvalidArgument(f"representative is not homogeneous of order {m}")
    if not in_DI(theta, A):
        raise NotIdealPreserving("representative does not preserve I")
    return GrClass(m, theta.map_coefficients(lambda f: poly_rem(f, A.Q)))


def gr_mul(aclass: GrClass, bclass: GrClass, A: Arrangement) -> GrClass:
    for c in (aclass, bclass):
        if not in_DI(c.rep, A):
            raise NotIdealPreserving("representative does not preserve I")
    m = aclass.m + bclass.m
    top = op_mul(aclass.rep, bclass.rep).order_component(m)
    return gr_class(top, A, m)


@dataclass(frozen=True)
class Certificate:
    m: int
    rows: int
    cols: int
    status: str  # "infeasible" or "feasible"
    witness: tuple
    lhs_degree: int
    rhs_min_degree: int

    FIELDS = ("m", "rows", "cols", "status", "witness", "lhs_degree", "rhs_min_degree")

    def to_text(self) -> str:
        w = "[" + ", ".join(str(v) for v in self.witness) + "]"
        return (
            f"m={self.m} rows={self.rows} cols={self.cols} status={self.status} "
            f"witness={w} lhs_degree={self.lhs_degree} rhs_min_degree={self.rhs_min_degree}"
        )

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "rows": self.rows,
            "cols": self.cols,
            "status": self.status,
            "witness": [str(v) for v in self.witness],
            "lhs_degree": self.lhs_degree,
            "rhs_min_degree": self.rhs_min_degree,
        }


def gr_membership_system(A: Arrangement, i: int, m: int):
    """Linear system for [P_i delta_i^m] = sum_j [P_i delta_i^j][theta_j] in Gr,
    restricted to the total-degree piece of the left side.

    Unknowns are the coefficients of S-multiples c * B of basis elements B of
    D^(m-j)(I), together with Q D^(m)(S) in the same piece.  Returns
    (rows, target, column labels, lowest polynomial degree of any product).
    """
    target_op = pdelta_op(A, i, m)
    D = target_op.poly_degree
    betas = [(m - t, t) for t in range(m + 1)]
    rows_index = [(beta, mono) for beta in betas for mono in monomials_of_degree(D)]
    columns = []
    labels = []
    rhs_min = None
    for j in range(1, m):
        left = pdelta_op(A, i, j)
        for b in basis_Dm(A, m - j):
            top = op_mul(left, b.op).order_component(m)
            deg = top.poly_degree
            rhs_min = deg if rhs_min is None else min(rhs_min, deg)
            e = D - deg
            for mono in monomials_of_degree(e):
                col_op = op_mul(left, b.op.left_mul_poly(Poly.monomial(*mono))).order_component(m)
                columns.append(col_op)
                labels.append((j, b.label, mono))
    for beta in betas:
        for mono in monomials_of_degree(D - A.Q.degree):
            columns.append(WeylOp.d(*beta, coeff=A.Q.shift(*mono)))
            labels.append((0, f"Q*Dx^{beta[0]}*Dy^{beta[1]}", mono))
    rows = [[col.coeff(*beta).coeff(*mono) for col in columns] for beta, mono in rows_index]
    target = [target_op.coeff(*beta).coeff(*mono) for beta, mono in rows_index]
    return rows, target, labels, rhs_min


def gr_not_fg_witness(A: Arrangement, i: int, M_bound: int):
    """Certify, for 2 <= m <= M_bound, that [P_i delta_i^m] is not in the Gr-ideal
    generated by [P_i delta_i], ..., [P_i delta_i^(m-1)]."""
    A.check_index(i)
    r = A.r
    certs = []
    for m in range(2, M_bound + 1):
        rows, target, labels, rhs_min = gr_membership_system(A, i, m)
        ncols = len(labels)
        lhs_degree = pdelta_op(A, i, m).poly_degree
        if r >= 2 and not (rhs_min is None or rhs_min > lhs_degree):
            raise TheoryViolation("a product of generators has too small a polynomial degree")
        sol = solve_linear(rows, target, ncols=ncols)
        if sol is None:
            witness = infeasibility_witness(rows, target, ncols=ncols)
            if witness is None:
                raise InternalInconsistency("inconsistent system without an infeasibility witness")
            status = "infeasible"
        else:
            if r >= 2:
                raise TheoryViolation(f"[P_{i} delta_{i}^{m}] lies in the ideal of lower powers")
            witness = tuple(sol)
            status = "feasible"
        certs.append(
            Certificate(
                m, len(rows), ncols, status, tuple(witness), lhs_degree,
                -1 if rhs_min is None else rhs_min,
            )
        )
    return certs


def check_certificate(cert: Certificate, A: Arrangement, i: int) -> bool:
    """Independently re-verify a certificate against a freshly built system."""
    rows, target, labels, _ = gr_membership_system(A, i, cert.m)
    w = list(cert.witness)
    if cert.status == "infeasible":
        if len(w) != len(rows):
            return False
        for c in range(len(labels)):
            if sum((w[k] * rows[k][c] for k in range(len(rows))), Fraction(0)):
                return False
        return sum((a * b for a, b in zip(w, target)), Fraction(0)) != 0
    if len(w) != len(labels):
        return False
    return all(
        sum((row[c] * w[c] for c in range(len(labels))), Fraction(0)) == t
        for row, t in zip(rows, target)
    )
