"""Slow reference computations used only by the tests.

They avoid the library's own membership tests and linear algebra so that
agreement means something.
"""

from fractions import Fraction
from math import prod

from dops.exact import Poly, poly_exact_divide
from dops.weyl import WeylOp, op_apply, op_mul


def ff(n, k):
    return prod(range(n - k + 1, n + 1)) if k <= n else 0


def rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((k for k in range(rk, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for k in range(len(rows)):
            if k != rk and rows[k][c] != 0:
                f = rows[k][c] / rows[rk][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[rk])]
        rk += 1
    return rk


def nullspace(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    rk = 0
    for c in range(ncols):
        piv = next((k for k in range(rk, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = 1 / rows[rk][c]
        rows[rk] = [a * inv for a in rows[rk]]
        for k in range(len(rows)):
            if k != rk and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[rk])]
        pivots.append(c)
        rk += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -rows[k][free]
        basis.append(v)
    return basis


def monos(d):
    return [(d - j, j) for j in range(d + 1)]


def apply_monomial(gamma, beta, i, j):
    """x^gamma D^beta applied to x^i y^j, straight from the power rule."""
    c = ff(i, beta[0]) * ff(j, beta[1])
    if c == 0:
        return None, 0
    return (i - beta[0] + gamma[0], j - beta[1] + gamma[1]), c


def ansatz_piece(qa, qb, m, d):
    """Brute-force basis of {order-m homogeneous operators with coefficients of
    degree d that map x^qa y^qb * S into itself}, as coordinate vectors indexed
    by (gamma, beta).

    For a monomial ideal, membership of the image is checked monomial by
    monomial on x^a y^b * x^qa y^qb with a + b <= m + 1.
    """
    unknowns = [(g, b) for b in monos(m) for g in monos(d)]
    rows = {}
    for s in range(m + 2):
        for a, b in monos(s):
            src = (a + qa, b + qb)
            for col, (g, beta) in enumerate(unknowns):
                mono, c = apply_monomial(g, beta, *src)
                if c and (mono[0] < qa or mono[1] < qb):
                    rows.setdefault((src, mono), [Fraction(0)] * len(unknowns))[col] += c
    return unknowns, nullspace(list(rows.values()), len(unknowns))


def span_piece(ops, m, d):
    """Coordinate vectors of x^gamma * B over basis operators B, degree d."""
    unknowns = [(g, b) for b in monos(m) for g in monos(d)]
    vecs = []
    for B in ops:
        e = d - B.poly_degree
        if e < 0:
            continue
        for g in monos(e):
            op = B.left_mul_poly(Poly.monomial(*g))
            vecs.append([op.coeff(*beta).coeff(*gam) for gam, beta in unknowns])
    return vecs


def same_span(u, v):
    ru, rv = rank(u), rank(v)
    return ru == rv == rank(list(u) + list(v))


def preserves_by_definition(theta, Q, depth=None):
    """theta(g*Q) divisible by Q for every monomial g of degree <= depth."""
    depth = (theta.order or 0) + 1 if depth is None else depth
    for s in range(depth + 1):
        for g in monos(s):
            img = op_apply(theta, Poly.monomial(*g) * Q)
            if poly_exact_divide(img, Q) is None:
                return False
    return True


def falling_euler(m):
    e1 = WeylOp({(1, 0): Poly.monomial(1, 0), (0, 1): Poly.monomial(0, 1)})
    out = WeylOp.from_poly(Poly.constant(1))
    for k in range(m):
        out = op_mul(out, e1 - WeylOp.from_poly(Poly.constant(k)))
    return out


def star_identity_holds(theta, star, h):
    """h * transpose(theta) == star * h, checked without rational functions."""
    from dops.weyl import transpose

    H = WeylOp.from_poly(h)
    return op_mul(H, transpose(theta)) == op_mul(star, H)
