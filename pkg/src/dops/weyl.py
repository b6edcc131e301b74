"""The Weyl algebra Q[x, y]<Dx, Dy>.

Operators are stored in left normal form ``sum_beta f_beta * D^beta`` with
``beta = (bx, by)`` and ``D^beta = Dx**bx * Dy**by``.  Products are computed
by commuting one derivation at a time past a coefficient
(``Dv * f = f * Dv + df/dv``); the closed Leibniz formula in
:func:`leibniz_expand` is an independent route used to cross-check it.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, combinations
from math import comb, factorial

from .errors import InvalidArgument, NotIdealPreserving, UndefinedOnZero, UnsupportedCase
from .exact import (
    ONE,
    ZERO,
    Poly,
    RatFunc,
    as_scalar,
    falling_factorial,
    grlex_key,
    linear_factors,
)


class WeylOp:
    """Differential operator with polynomial coefficients, left normal form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for beta, f in terms.items():
                f = Poly.coerce(f)
                if not f.is_zero():
                    bx, by = beta
                    if bx < 0 or by < 0:
                        raise InvalidArgument(f"negative derivative index {beta}")
                    clean[(int(bx), int(by))] = f
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        op = cls.__new__(cls)
        op._terms = terms
        op._hash = None
        return op

    @classmethod
    def from_poly(cls, f) -> WeylOp:
        return cls({(0, 0): Poly.coerce(f)})

    @classmethod
    def d(cls, bx, by, coeff=None) -> WeylOp:
        """The monomial operator coeff * Dx^bx * Dy^by."""
        return cls({(bx, by): ONE if coeff is None else Poly.coerce(coeff)})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """(beta, coefficient) pairs, beta in descending graded lex order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coeff(self, bx, by) -> Poly:
        return self._terms.get((bx, by), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def order(self):
        """Largest |beta|; ``None`` stands for the order of the zero operator."""
        if not self._terms:
            return None
        return max(bx + by for bx, by in self._terms)

    @property
    def poly_degree(self) -> int:
        """Largest total degree among the coefficients (-1 for zero)."""
        return max((f.degree for f in self._terms.values()), default=-1)

    def order_component(self, m) -> WeylOp:
        return WeylOp._raw({b: f for b, f in self._terms.items() if b[0] + b[1] == m})

    def orders(self):
        return sorted({bx + by for bx, by in self._terms})

    def is_order_homogeneous(self) -> bool:
        return len(self.orders()) <= 1

    def map_coefficients(self, fn) -> WeylOp:
        return WeylOp({b: fn(f) for b, f in self._terms.items()})

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, WeylOp):
            return self._terms == other._terms
        if isinstance(other, (Poly, int, Fraction)):
            return self == WeylOp.from_poly(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return WeylOp._raw({b: -f for b, f in self._terms.items()})

    def __add__(self, other):
        other = _coerce_op(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for b, f in other._terms.items():
            s = out[b] + f if b in out else f
            if s.is_zero():
                out.pop(b, None)
            else:
                out[b] = s
        return WeylOp._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_op(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> WeylOp:
        c = as_scalar(c)
        if not c:
            return WeylOp()
        return WeylOp._raw({b: f.scale(c) for b, f in self._terms.items()})

    def left_mul_poly(self, g: Poly) -> WeylOp:
        return WeylOp({b: g * f for b, f in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce_op(other)
        if other is None:
            return NotImplemented
        return op_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Poly):
            return self.left_mul_poly(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InvalidArgument("operator powers must be non-negative integers")
        result = IDENTITY
        for _ in range(n):
            result = op_mul(result, self)
        return result

    def __call__(self, f: Poly) -> Poly:
        return op_apply(self, f)

    def __repr__(self):
        from .text import format_op

        return f"WeylOp({format_op(self)!r})"

    def __str__(self):
        from .text import format_op

        return format_op(self)


def _coerce_op(value):
    if isinstance(value, WeylOp):
        return value
    if isinstance(value, (Poly, int, Fraction)):
        return WeylOp.from_poly(value)
    return None


IDENTITY = WeylOp.from_poly(ONE)
DX = WeylOp.d(1, 0)
DY = WeylOp.d(0, 1)


class RightWeylOp:
    """Operator written with derivations on the left: sum_beta D^beta * g_beta."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {}
        for beta, g in (terms or {}).items():
            g = Poly.coerce(g)
            if not g.is_zero():
                self._terms[tuple(beta)] = g

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def order(self):
        if not self._terms:
            return None
        return max(bx + by for bx, by in self._terms)

    def __eq__(self, other):
        if not isinstance(other, RightWeylOp):
            return NotImplemented
        return self._terms == other._terms

    def to_left(self) -> WeylOp:
        return left_normal_form(self)

    def apply(self, f: Poly) -> Poly:
        out = ZERO
        for beta, g in self._terms.items():
            out = out + (g * f).diff_multi(beta)
        return out

    def __repr__(self):
        parts = [f"D{b}*({g})" for b, g in sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)]
        return "RightWeylOp(" + " + ".join(parts) + ")"


# -- action and product ---------------------------------------------------------


def op_apply(theta: WeylOp, f: Poly) -> Poly:
    """Apply theta to the polynomial f."""
    out = ZERO
    for beta, coef in theta._terms.items():
        df = f.diff_multi(beta)
        if not df.is_zero():
            out = out + coef * df
    return out


def _dv_times(var, terms):
    """Left-multiply the operator with the given terms by D_var."""
    k = 0 if var == "x" else 1
    out = {}

    def add(b, g):
        if b in out:
            s = out[b] + g
            if s.is_zero():
                del out[b]
            else:
                out[b] = s
        else:
            out[b] = g

    for (bx, by), g in terms.items():
        add((bx + 1, by) if k == 0 else (bx, by + 1), g)
        dg = g.diff(k)
        if not dg.is_zero():
            add((bx, by), dg)
    return out


def op_mul(theta: WeylOp, eta: WeylOp) -> WeylOp:
    """Left normal form of the composition theta o eta."""
    if theta.is_zero() or eta.is_zero():
        return WeylOp()
    cache = {(0, 0): eta._terms}

    def d_times_eta(beta):
        if beta in cache:
            return cache[beta]
        bx, by = beta
        if by > 0:
            val = _dv_times("y", d_times_eta((bx, by - 1)))
        else:
            val = _dv_times("x", d_times_eta((bx - 1, by)))
        cache[beta] = val
        return val

    out = {}
    for beta in sorted(theta._terms, key=grlex_key):
        f = theta._terms[beta]
        for gamma, g in d_times_eta(beta).items():
            prod = f * g
            if gamma in out:
                s = out[gamma] + prod
                if s.is_zero():
                    del out[gamma]
                else:
                    out[gamma] = s
            elif not prod.is_zero():
                out[gamma] = prod
    return WeylOp._raw(out)


def const_derivation_power(delta: WeylOp, n: int) -> WeylOp:
    """delta**n for delta = a*Dx + b*Dy with constant a, b (binomial expansion)."""
    a, b = _constant_derivation(delta)
    terms = {}
    for t in range(n + 1):
        c = comb(n, t) * a**t * b ** (n - t)
        if c:
            terms[(t, n - t)] = Poly.constant(c)
    return WeylOp(terms)


def _constant_derivation(delta: WeylOp):
    keys = set(delta._terms)
    if not keys or not keys <= {(1, 0), (0, 1)}:
        raise InvalidArgument("expected a derivation a*Dx + b*Dy with constant a, b")
    for f in delta._terms.values():
        if not f.is_constant():
            raise InvalidArgument("expected constant coefficients in the derivation")
    return delta.coeff(1, 0).constant_term(), delta.coeff(0, 1).constant_term()


def leibniz_expand(delta: WeylOp, forms, m: int, summation: str = "subsets") -> WeylOp:
    """Closed form of delta^m * f_1 ... f_k for degree-one f_j and k <= m.

    ``summation`` picks one of the two equivalent inner sums: over
    i-subsets of the factors, or over all permutations of them divided by
    i!(k-i)!.
    """
    _constant_derivation(delta)
    forms = [Poly.coerce(f) for f in forms]
    for f in forms:
        if f.degree != 1:
            raise InvalidArgument(f"{f} is not of degree one")
    k = len(forms)
    if k > m:
        raise UnsupportedCase(f"closed form needs k <= m, got k={k}, m={m}")
    dvals = [op_apply(delta, f) for f in forms]
    result = WeylOp()
    for i in range(k + 1):
        if summation == "subsets":
            e = ZERO
            for lam in combinations(range(k), i):
                term = ONE
                for j in range(k):
                    term = term * (dvals[j] if j in lam else forms[j])
                e = e + term
        elif summation == "permutations":
            e = ZERO
            for sigma in permutations(range(k)):
                term = ONE
                for pos, j in enumerate(sigma):
                    term = term * (dvals[j] if pos < i else forms[j])
                e = e + term
            e = e.scale(Fraction(1, factorial(i) * factorial(k - i)))
        else:
            raise InvalidArgument(f"unknown summation {summation!r}")
        coef = e.scale(falling_factorial(m, i))
        if not coef.is_zero():
            result = result + const_derivation_power(delta, m - i).left_mul_poly(coef)
    return result


# -- gradings -----------------------------------------------------------------------


def op_order(theta: WeylOp) -> int:
    if theta.is_zero():
        raise UndefinedOnZero("the order of the zero operator is undefined")
    return theta.order


def op_totdeg(theta: WeylOp) -> int:
    """Largest |alpha| - |beta| over monomials x^alpha D^beta of theta."""
    if theta.is_zero():
        raise UndefinedOnZero("the total degree of the zero operator is undefined")
    return max(f.degree - (bx + by) for (bx, by), f in theta._terms.items())


def totdeg_component(theta: WeylOp, d: int) -> WeylOp:
    return WeylOp._raw(
        {
            b: part
            for b, f in theta._terms.items()
            if not (part := f.homogeneous_part(d + b[0] + b[1])).is_zero()
        }
    )


def totdeg_components(theta: WeylOp):
    """(d, component) pairs over all total degrees present, ascending."""
    degrees = set()
    for (bx, by), f in theta._terms.items():
        for i, j in f.terms:
            degrees.add(i + j - bx - by)
    return [(d, totdeg_component(theta, d)) for d in sorted(degrees)]


# -- anti-automorphisms and normal forms ----------------------------------------------


def transpose(theta: WeylOp) -> WeylOp:
    """Formal transpose: x, y fixed, Dx -> -Dx, Dy -> -Dy, products reversed."""
    out = WeylOp()
    for (bx, by), f in theta._terms.items():
        term = op_mul(WeylOp.d(bx, by), WeylOp.from_poly(f))
        out = out + (term if (bx + by) % 2 == 0 else -term)
    return out


def right_normal_form(theta: WeylOp) -> RightWeylOp:
    """Rewrite sum f_beta D^beta as sum D^beta g_beta."""
    out = {}
    for (bx, by), f in theta._terms.items():
        for kx in range(bx + 1):
            for ky in range(by + 1):
                g = f.diff_multi((kx, ky))
                if g.is_zero():
                    continue
                c = comb(bx, kx) * comb(by, ky) * (-1) ** (kx + ky)
                key = (bx - kx, by - ky)
                out[key] = out.get(key, ZERO) + g.scale(c)
    return RightWeylOp(out)


def left_normal_form(rho: RightWeylOp) -> WeylOp:
    out = WeylOp()
    for (bx, by), g in rho._terms.items():
        out = out + op_mul(WeylOp.d(bx, by), WeylOp.from_poly(g))
    return out


def conjugate_star(theta: WeylOp, h: Poly, factors=None) -> WeylOp:
    """h * transpose(theta) * h^-1, for h a product of linear forms.

    The conjugate is formed with rational-function coefficients whose
    denominators are powers of the linear factors of h, then cleared by
    exact division.  A non-polynomial result means theta does not preserve
    the ideal hS, and NotIdealPreserving is raised.
    """
    h = Poly.coerce(h)
    if h.is_zero():
        raise InvalidArgument("h must be nonzero")
    if factors is None:
        c, forms = linear_factors(h)
    else:
        forms = [Poly.coerce(f) for f in factors]
        prod = ONE
        for f in forms:
            prod = prod * f
        c = _scalar_ratio(h, prod)
        if c is None:
            raise InvalidArgument("declared factors do not multiply to a scalar multiple of h")
    scale, monic = RatFunc.monic_factors(forms)
    distinct = []
    for f in monic:
        if f not in distinct:
            distinct.append(f)
    distinct.sort(key=lambda p: sorted(p.terms.items()))
    exps = tuple(monic.count(f) for f in distinct)
    total = c * scale
    h_inv = RatFunc(Poly.constant(1 / total), distinct, exps)

    t = transpose(theta)
    derivs = {(0, 0): h_inv}

    def d_h_inv(kappa):
        if kappa not in derivs:
            kx, ky = kappa
            if ky:
                derivs[kappa] = d_h_inv((kx, ky - 1)).diff("y")
            else:
                derivs[kappa] = d_h_inv((kx - 1, ky)).diff("x")
        return derivs[kappa]

    coeffs = {}
    for (bx, by), g in t._terms.items():
        for kx in range(bx + 1):
            for ky in range(by + 1):
                part = d_h_inv((kx, ky)) * g
                part = part * (comb(bx, kx) * comb(by, ky))
                key = (bx - kx, by - ky)
                coeffs[key] = coeffs[key] + part if key in coeffs else part
    out = {}
    for key, rf in coeffs.items():
        p = (rf * h).to_poly()
        if p is None:
            raise NotIdealPreserving(
                "conjugate has non-polynomial coefficients; the operator does not preserve hS"
            )
        out[key] = p
    return WeylOp(out)


def _scalar_ratio(h: Poly, prod: Poly):
    """c with h == c*prod, or None."""
    c = h.leading_coefficient() / prod.leading_coefficient()
    return c if prod.scale(c) == h else None
