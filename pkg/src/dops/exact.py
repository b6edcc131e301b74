"""Exact arithmetic over Q: bivariate polynomials, restricted rational
functions and dense linear algebra.

Scalars are :class:`fractions.Fraction`.  Polynomials live in ``Q[x, y]``
and are stored sparsely as ``{(i, j): coeff}`` for ``coeff * x**i * y**j``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InvalidArgument

Scalar = Fraction
Monomial = tuple  # (i, j)


def as_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise InvalidArgument("floating point coefficients are not accepted")
    return Fraction(c)


def grlex_key(mono):
    """Sort key for graded lexicographic order with x > y (larger is bigger)."""
    i, j = mono
    return (i + j, i)


class Poly:
    """Immutable sparse polynomial in x, y with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = as_scalar(c)
                if c:
                    i, j = mono
                    if i < 0 or j < 0:
                        raise InvalidArgument(f"negative exponent in {mono}")
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # terms already normalized: no zeros, Fraction values
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> Poly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i, j, c=1) -> Poly:
        return cls({(i, j): c})

    @classmethod
    def coerce(cls, value) -> Poly:
        if isinstance(value, Poly):
            return value
        return cls.constant(value)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (descending graded lex) order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coeff(self, i, j) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self.coeff(0, 0)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((i + j for i, j in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self._terms}) <= 1

    def leading_monomial(self):
        if not self._terms:
            return None
        return max(self._terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        lm = self.leading_monomial()
        return self._terms[lm] if lm is not None else Fraction(0)

    def degree_in(self, var) -> int:
        k = _var_index(var)
        return max((m[k] for m in self._terms), default=-1)

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.constant(other)
            else:
                return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.constant(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Poly:
        c = as_scalar(c)
        if not c:
            return ZERO
        return Poly._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InvalidArgument("polynomial powers must be non-negative integers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, i, j) -> Poly:
        """Multiply by the monomial x**i * y**j."""
        return Poly._raw({(a + i, b + j): c for (a, b), c in self._terms.items()})

    def diff(self, var, n=1) -> Poly:
        """n-th formal partial derivative in ``var`` (``'x'``/``'y'`` or 0/1)."""
        k = _var_index(var)
        out = {}
        for mono, c in self._terms.items():
            e = mono[k]
            if e < n:
                continue
            f = c
            for t in range(n):
                f *= e - t
            new = list(mono)
            new[k] = e - n
            out[tuple(new)] = f
        return Poly._raw(out)

    def diff_multi(self, beta) -> Poly:
        bx, by = beta
        p = self
        if bx:
            p = p.diff(0, bx)
        if by:
            p = p.diff(1, by)
        return p

    def evaluate(self, x, y) -> Fraction:
        x, y = as_scalar(x), as_scalar(y)
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def substitute(self, x_image: Poly, y_image: Poly) -> Poly:
        """Compose with the substitution x -> x_image, y -> y_image."""
        out = ZERO
        xp, yp = {}, {}
        for (i, j), c in self._terms.items():
            if i not in xp:
                xp[i] = x_image**i
            if j not in yp:
                yp[j] = y_image**j
            out = out + (xp[i] * yp[j]).scale(c)
        return out

    def homogeneous_part(self, d) -> Poly:
        return Poly._raw({m: c for m, c in self._terms.items() if m[0] + m[1] == d})

    def __repr__(self):
        from .text import format_poly

        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        from .text import format_poly

        return format_poly(self)


def _var_index(var) -> int:
    if var in (0, "x"):
        return 0
    if var in (1, "y"):
        return 1
    raise InvalidArgument(f"unknown variable {var!r}")


ZERO = Poly()
ONE = Poly.constant(1)
X = Poly.monomial(1, 0)
Y = Poly.monomial(0, 1)


def monomials_of_degree(d):
    """Monomials of total degree d in descending graded lex order."""
    if d < 0:
        return []
    return [(i, d - i) for i in range(d, -1, -1)]


# -- division -----------------------------------------------------------------


def poly_divmod(f: Poly, g: Poly):
    """Division by a single polynomial with respect to graded lex order.

    The remainder has no monomial divisible by the leading monomial of g, so
    it is the canonical normal form of f modulo the principal ideal (g).
    """
    if g.is_zero():
        raise InvalidArgument("division by the zero polynomial")
    (gi, gj) = g.leading_monomial()
    glc = g.leading_coefficient()
    gterms = g._terms
    p = dict(f._terms)
    q = {}
    r = {}
    while p:
        lm = max(p, key=grlex_key)
        c = p[lm]
        if lm[0] >= gi and lm[1] >= gj:
            s = (lm[0] - gi, lm[1] - gj)
            t = c / glc
            q[s] = q.get(s, 0) + t
            for (a, b), v in gterms.items():
                m = (a + s[0], b + s[1])
                nv = p.get(m, 0) - t * v
                if nv:
                    p[m] = nv
                else:
                    p.pop(m, None)
        else:
            r[lm] = c
            del p[lm]
    return Poly(q), Poly._raw(r)


def poly_exact_divide(f: Poly, g: Poly):
    """Return q with f == g*q, or None when g does not divide f."""
    if g.is_zero():
        raise InvalidArgument("division by the zero polynomial")
    q, r = poly_divmod(f, g)
    return q if r.is_zero() else None


def poly_rem(f: Poly, g: Poly) -> Poly:
    return poly_divmod(f, g)[1]


def divides(g: Poly, f: Poly) -> bool:
    return poly_exact_divide(f, g) is not None


def homogeneous_components(f: Poly):
    """Split f into (degree, homogeneous piece) pairs, ascending in degree."""
    degrees = sorted({i + j for i, j in f._terms})
    return [(d, f.homogeneous_part(d)) for d in degrees]


def falling_factorial(m, i) -> Fraction:
    """[m]_i = m (m-1) ... (m-i+1), with [m]_0 = 1."""
    if i < 0:
        raise InvalidArgument("falling factorial needs i >= 0")
    out = 1
    for t in range(i):
        out *= m - t
    return Fraction(out)


def multinomial(alpha) -> int:
    """|alpha|! / alpha! for a pair alpha."""
    return comb(alpha[0] + alpha[1], alpha[0])


# -- linear forms and factorization ----------------------------------------------


def linear_coefficients(p: Poly):
    """(a, b) for a homogeneous degree-one polynomial a*x + b*y."""
    if p.is_zero() or not all(i + j == 1 for i, j in p._terms):
        raise InvalidArgument(f"{p} is not a linear form")
    return p.coeff(1, 0), p.coeff(0, 1)


def _rational_roots(coeffs):
    """Rational roots of sum coeffs[k] t^k (coeffs[0] != 0 assumed)."""
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    lead, const = abs(ints[-1]), abs(ints[0])

    def divisors(n):
        out, d = set(), 1
        while d * d <= n:
            if n % d == 0:
                out.update((d, n // d))
            d += 1
        return out

    roots = set()
    for p in divisors(const):
        for q in divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand**k for k, c in enumerate(coeffs)) == 0:
                    roots.add(cand)
    return sorted(roots)


def linear_factors(h: Poly):
    """Factor a binary form into rational linear forms.

    Returns ``(c, forms)`` with ``h == c * prod(forms)`` (forms repeated by
    multiplicity, each monic in graded lex order).  Raises InvalidArgument if
    h is not homogeneous or does not split over Q.
    """
    if h.is_zero():
        raise InvalidArgument("cannot factor the zero polynomial")
    if not h.is_homogeneous():
        raise InvalidArgument(f"{h} is not homogeneous; only products of linear forms are supported")
    d = h.degree
    coeffs = [h.coeff(k, d - k) for k in range(d + 1)]  # coefficient of x^k y^(d-k)
    forms = []
    low = next(k for k, c in enumerate(coeffs) if c)
    high = max(k for k, c in enumerate(coeffs) if c)
    forms += [X] * low
    forms += [Y] * (d - high)
    g = coeffs[low : high + 1]
    # g(t) with t = x/y; each root rho contributes x - rho*y
    while len(g) > 1:
        roots = _rational_roots(g)
        if not roots:
            raise InvalidArgument(f"{h} does not split into rational linear forms")
        rho = roots[0]
        # synthetic division of g by (t - rho)
        n = len(g) - 1
        quo = [Fraction(0)] * n
        acc = Fraction(0)
        for k in range(n, 0, -1):
            acc = g[k] + acc * rho
            quo[k - 1] = acc
        g = quo
        forms.append(X - Y.scale(rho))
    prod_forms = ONE
    for f in forms:
        prod_forms = prod_forms * f
    c = h.leading_coefficient() / prod_forms.leading_coefficient()
    return c, forms


# -- restricted rational functions ---------------------------------------------------


class RatFunc:
    """num / prod(factors[k] ** exps[k]) for a declared tuple of factors.

    Factors are stored monic (graded-lex leading coefficient 1), so the
    denominator is monic too.  Shared factors are cancelled by trial division.
    """

    __slots__ = ("num", "factors", "exps")

    def __init__(self, num: Poly, factors, exps=None):
        factors = tuple(factors)
        if exps is None:
            exps = (0,) * len(factors)
        exps = list(exps)
        for f in factors:
            if f.leading_coefficient() != 1:
                raise InvalidArgument("RatFunc factors must be monic")
        if not num.is_zero():
            for k, f in enumerate(factors):
                while exps[k] > 0:
                    q = poly_exact_divide(num, f)
                    if q is None:
                        break
                    num = q
                    exps[k] -= 1
        else:
            exps = [0] * len(factors)
        self.num = num
        self.factors = factors
        self.exps = tuple(exps)

    @staticmethod
    def monic_factors(forms):
        """Normalize factors to monic; returns (scale, monic_forms) with prod(forms) == scale*prod(monic)."""
        scale = Fraction(1)
        out = []
        for f in forms:
            lc = f.leading_coefficient()
            scale *= lc
            out.append(f.scale(1 / lc))
        return scale, tuple(out)

    def denominator(self) -> Poly:
        d = ONE
        for f, e in zip(self.factors, self.exps):
            d = d * f**e
        return d

    def is_polynomial(self) -> bool:
        return not any(self.exps)

    def to_poly(self):
        return self.num if self.is_polynomial() else None

    def _check(self, other):
        if self.factors != other.factors:
            raise InvalidArgument("RatFunc operands use different factor lists")

    def __add__(self, other):
        if isinstance(other, Poly):
            other = RatFunc(other, self.factors)
        self._check(other)
        exps = tuple(max(a, b) for a, b in zip(self.exps, other.exps))
        n1, n2 = self.num, other.num
        for f, e, a, b in zip(self.factors, exps, self.exps, other.exps):
            if e > a:
                n1 = n1 * f ** (e - a)
            if e > b:
                n2 = n2 * f ** (e - b)
        return RatFunc(n1 + n2, self.factors, exps)

    def __neg__(self):
        return RatFunc(-self.num, self.factors, self.exps)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num.scale(other), self.factors, self.exps)
        if isinstance(other, Poly):
            return RatFunc(self.num * other, self.factors, self.exps)
        self._check(other)
        return RatFunc(
            self.num * other.num,
            self.factors,
            tuple(a + b for a, b in zip(self.exps, other.exps)),
        )

    __rmul__ = __mul__

    def diff(self, var) -> RatFunc:
        # d(N / prod f_k^e_k) = (N' prod f_k - N sum_k e_k f_k' prod_{l!=k} f_l) / prod f_k^(e_k+1)
        # restricted to the factors actually present
        active = [k for k, e in enumerate(self.exps) if e]
        all_active = ONE
        for k in active:
            all_active = all_active * self.factors[k]
        top = self.num.diff(var) * all_active
        for k in active:
            others = ONE
            for l in active:
                if l != k:
                    others = others * self.factors[l]
            top = top - (self.num * self.factors[k].diff(var) * others).scale(self.exps[k])
        exps = tuple(e + 1 if e else 0 for e in self.exps)
        return RatFunc(top, self.factors, exps)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.factors == other.factors and self.num == other.num and self.exps == other.exps

    def __repr__(self):
        return f"RatFunc({self.num} / {self.denominator()})"


# -- dense linear algebra over Q -----------------------------------------------------


def _check_matrix(A, ncols):
    if ncols is None:
        if not A:
            raise InvalidArgument("ncols is required for a matrix with no rows")
        ncols = len(A[0])
    for row in A:
        if len(row) != ncols:
            raise InvalidArgument("ragged matrix")
    return ncols


def rref(A, ncols=None):
    """Reduced row echelon form.  Returns (rows, pivot_columns).

    Pivots are chosen as the first nonzero entry in row order in each column.
    """
    ncols = _check_matrix(A, ncols)
    M = [[as_scalar(v) for v in row] for row in A]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(M)) if M[k][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for k in range(len(M)):
            if k != r and M[k][col]:
                f = M[k][col]
                M[k] = [a - f * b for a, b in zip(M[k], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A, ncols=None) -> int:
    if not A:
        return 0
    return len(rref(A, ncols)[1])


def solve_linear(A, b, ncols=None):
    """One exact solution of A v = b, or None if the system is inconsistent.

    Free variables are set to zero.
    """
    if len(b) != len(A):
        raise InvalidArgument(f"{len(A)} rows but right-hand side of length {len(b)}")
    ncols = _check_matrix(A, ncols) if A else (ncols or 0)
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    if not aug:
        return [Fraction(0)] * ncols
    M, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, col in zip(M, pivots):
        v[col] = row[ncols]
    return v


def nullspace(A, ncols=None):
    """Basis of {v : A v = 0}."""
    ncols = _check_matrix(A, ncols) if A else ncols
    if ncols is None:
        raise InvalidArgument("ncols is required for a matrix with no rows")
    if not A:
        M, pivots = [], []
    else:
        M, pivots = rref(A, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for row, pcol in zip(M, pivots):
            v[pcol] = -row[fcol]
        basis.append(v)
    return basis


def transpose_matrix(A, ncols):
    return [[A[r][c] for r in range(len(A))] for c in range(ncols)]


def mat_vec(A, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A]


def infeasibility_witness(A, b, ncols=None):
    """A vector w with w^T A = 0 and w . b != 0, or None if A v = b is solvable."""
    if not A:
        return None
    ncols = _check_matrix(A, ncols)
    for w in nullspace(transpose_matrix(A, ncols), len(A)):
        if sum((wi * bi for wi, bi in zip(w, b)), Fraction(0)):
            return w
    return None


def determinant(A) -> Fraction:
    n = len(A)
    M = [[as_scalar(v) for v in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((k for k in range(col, n) if M[k][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for k in range(col + 1, n):
            if M[k][col]:
                f = M[k][col] / M[col][col]
                M[k] = [a - f * b for a, b in zip(M[k], M[col])]
    return det


def poly_determinant(A) -> Poly:
    """Determinant of a square matrix of polynomials (fraction-free Bareiss)."""
    n = len(A)
    if n == 0:
        return ONE
    M = [[Poly.coerce(v) for v in row] for row in A]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not M[r][k].is_zero()), None)
            if swap is None:
                return ZERO
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q = poly_exact_divide(num, prev)
                if q is None:  # pragma: no cover - Bareiss division is exact
                    raise ArithmeticError("inexact Bareiss step")
                M[i][j] = q
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


__all__ = [
    "Scalar",
    "Poly",
    "RatFunc",
    "ZERO",
    "ONE",
    "X",
    "Y",
    "as_scalar",
    "grlex_key",
    "monomials_of_degree",
    "poly_divmod",
    "poly_exact_divide",
    "poly_rem",
    "divides",
    "homogeneous_components",
    "falling_factorial",
    "multinomial",
    "linear_coefficients",
    "linear_factors",
    "rref",
    "rank",
    "solve_linear",
    "nullspace",
    "mat_vec",
    "infeasibility_witness",
    "determinant",
    "poly_determinant",
]
