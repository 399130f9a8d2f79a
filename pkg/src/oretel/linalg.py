"""Nullspaces of matrices over K(x), computed fraction-free over Z[x, params].

Rows are cleared of denominators, converted to flint multivariate integer
polynomials and reduced by fraction-free Gauss-Jordan elimination
(Bareiss): every entry after step k is a k x k minor, so the division by
the previous pivot is exact.
"""

from __future__ import annotations

import math
from functools import lru_cache

import flint

from .arith import RatFunc, poly_gcd, poly_lcm


class SingularityError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _ctx(symbols: tuple[str, ...]):
    return flint.fmpz_mpoly_ctx.get(symbols, "lex")


def _clear_row(row, ring):
    """Scale a row of y-free rational functions to integer polynomials."""
    den = ring.one
    for c in row:
        if c:
            den = poly_lcm(den, c.denom)
    field = ring.to_field()
    d = field.new(den)
    polys = []
    for c in row:
        s = c * d
        if not s.denom.is_ground:
            raise SingularityError("row denominators did not clear")
        polys.append(s.numer * (1 / s.denom.LC) if s else ring.zero)
    scale = 1
    for p in polys:
        for v in p.coeffs():
            scale = math.lcm(scale, int(v.denominator))
    return [p * scale for p in polys]


def _to_flint(p, ctx):
    """Drop the (absent) y exponent and convert to fmpz_mpoly."""
    return ctx.from_dict({(m[0],) + tuple(m[2:]): int(v) for m, v in p.terms()})


def _from_flint(p, ring):
    return ring.from_dict({(m[0], 0) + tuple(m[1:]): ring.domain(int(v)) for m, v in p.to_dict().items()})


def rref_fraction_free(A, ncols: int):
    """Fraction-free Gauss-Jordan form of A.

    Pivots are chosen by minimal total degree within the column, ties by row
    index.  Returns (R, pivot_columns, den): every pivot entry of R equals den.
    """
    A = [list(r) for r in A]
    m = len(A)
    if not m:
        return A, [], None
    zero = A[0][0] * 0
    prev = zero + 1
    pivots = []
    row = 0
    for col in range(ncols):
        best = None
        for i in range(row, m):
            a = A[i][col]
            if a:
                d = a.total_degree()
                if best is None or d < best[0]:
                    best = (d, i)
        if best is None:
            continue
        i0 = best[1]
        A[row], A[i0] = A[i0], A[row]
        p = A[row][col]
        prow = A[row]
        for i in range(m):
            if i == row:
                continue
            ri = A[i]
            a = ri[col]
            if a:
                A[i] = [(p * x - a * y) / prev if (x or y) else zero for x, y in zip(ri, prow)]
            else:
                A[i] = [(p * x) / prev if x else zero for x in ri]
        prev = p
        pivots.append(col)
        row += 1
        if row == m:
            break
    return A, pivots, prev


def _primitive(vec, ring):
    """Divide out the polynomial content; make the first nonzero entry positive."""
    g = ring.zero
    for c in vec:
        if c:
            g = c if not g else poly_gcd(g, c, "x")
    if not g:
        return vec
    vec = [c.exquo(g) if c else c for c in vec]
    lead = next(c for c in vec if c)
    lc = lead.LC
    return [c * (1 / lc) if c else c for c in vec]


def nullspace(rows, field, ncols: int | None = None) -> list[tuple[RatFunc, ...]]:
    """Basis of {w : A w = 0} for A given as rows of rational functions.

    Entries may depend on x and the parameters only.  The basis vectors are
    polynomial with trivial content, and A w = 0 is re-checked exactly.
    """
    ring = field.ring
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return []
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(field.one if i == j else field.zero for i in range(ncols)) for j in range(ncols)]
    if any(c.numer.degree(1) > 0 or c.denom.degree(1) > 0 for r in rows for c in r if c):
        raise ValueError("nullspace entries must be free of y")
    ctx = _ctx(tuple(str(s) for s in (ring.symbols[0],) + tuple(ring.symbols[2:])))
    zero = ctx.from_dict({})
    one = ctx.from_dict({(0,) * ctx.nvars(): 1})
    A = [[_to_flint(c, ctx) for c in _clear_row(r, ring)] for r in rows]
    # dividing a column by its content only rescales the matching unknown
    scales = []
    for j in range(ncols):
        g = zero
        for r in A:
            if r[j]:
                g = r[j] if g.is_zero() else g.gcd(r[j])
        g = one if g.is_zero() else g
        scales.append(g)
        for r in A:
            if r[j]:
                r[j] = r[j] / g
    R, pivots, den = rref_fraction_free(A, ncols)
    result = []
    for f in range(ncols):
        if f in pivots:
            continue
        raw = [zero] * ncols
        raw[f] = den
        for i, pc in enumerate(pivots):
            raw[pc] = -R[i][f]
        # undo the column scaling: w_j = raw_j / g_j, then clear denominators
        lcm = one
        for g, c in zip(scales, raw):
            if c:
                lcm = lcm * g / lcm.gcd(g)
        vec = [_from_flint(c * (lcm / g), ring) if c else ring.zero for c, g in zip(raw, scales)]
        vec = _primitive(vec, ring)
        result.append(tuple(field.new(c) for c in vec))
    for vec in result:
        for row in rows:
            if sum((a * b for a, b in zip(row, vec) if a and b), field.zero):
                raise SingularityError("nullspace vector fails the post-check")
    return result


def echelon_on_prefix(basis, prefix: int, field):
    """Recombine a nullspace basis so the first ``prefix`` coordinates are in echelon form.

    Pivots are taken from the highest index downward; the returned list starts
    with the vector whose prefix support ends earliest.
    """
    vecs = [list(v) for v in basis]
    out = []
    for col in range(prefix - 1, -1, -1):
        piv = next((v for v in vecs if v[col]), None)
        if piv is None:
            continue
        vecs.remove(piv)
        new = []
        for v in vecs:
            if v[col]:
                f = v[col] / piv[col]
                v = [a - f * b for a, b in zip(v, piv)]
            new.append(v)
        vecs = new
        out.append(piv)
    rest = [v for v in vecs if any(v)]
    out.reverse()
    return [tuple(v) for v in out], [tuple(v) for v in rest]


def make_polynomial(vec, field):
    """Scale a rational vector to integer polynomial entries with trivial content."""
    ring = field.ring
    den = ring.one
    for c in vec:
        if c:
            den = poly_lcm(den, c.denom)
    d = field.new(den)
    polys = []
    for c in vec:
        s = c * d
        polys.append(s.numer * (1 / s.denom.LC) if s else ring.zero)
    polys = _primitive(polys, ring)
    scale = 1
    for p in polys:
        for v in p.coeffs():
            scale = math.lcm(scale, int(v.denominator))
    numer = 0
    for p in polys:
        for v in p.coeffs():
            numer = math.gcd(numer, int(v * scale))
    return tuple(field.new(c * scale / numer) if c else field.zero for c in polys)
