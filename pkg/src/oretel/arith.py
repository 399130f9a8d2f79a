"""Exact arithmetic in Q(params)[x, y] and Q(params)(x, y).

Polynomials and rational functions are sympy sparse ring/field elements over
QQ with generators ``(x, y, *params)``.  Parameters are treated as
transcendental constants: a polynomial "in K[x, y]" is a ring element, and a
rational function whose denominator is free of x and y is still a polynomial
over K.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce

from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement

Poly = PolyElement
RatFunc = FracElement

NEG_INF = float("-inf")
RESERVED = frozenset({"x", "y", "Dx", "Dy"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class InexactDivision(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _make_field(params: tuple[str, ...]) -> FracField:
    return FracField(("x", "y") + params, QQ, lex)


@dataclass(frozen=True)
class FieldSpec:
    """The ground field K = Q(parameters) together with the variables x, y."""

    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        params = tuple(self.parameters)
        object.__setattr__(self, "parameters", params)
        if len(set(params)) != len(params):
            raise ValueError("parameter symbols must be pairwise distinct")
        for p in params:
            if not _IDENT.match(p):
                raise ValueError(f"invalid parameter symbol {p!r}")
            if p in RESERVED:
                raise ValueError(f"parameter {p!r} clashes with a reserved symbol")

    @property
    def field(self) -> FracField:
        return _make_field(self.parameters)

    @property
    def ring(self):
        return self.field.ring

    @property
    def x(self) -> RatFunc:
        return self.field.gens[0]

    @property
    def y(self) -> RatFunc:
        return self.field.gens[1]

    def param(self, name: str) -> RatFunc:
        return self.field.gens[2 + self.parameters.index(name)]

    def symbol(self, name: str) -> RatFunc:
        if name == "x":
            return self.x
        if name == "y":
            return self.y
        if name in self.parameters:
            return self.param(name)
        raise KeyError(name)

    def rat(self, value) -> RatFunc:
        """Coerce an int, Fraction, ring or field element, or expression string."""
        if isinstance(value, str):
            from .parsing import parse_rational

            return parse_rational(value, self)
        if isinstance(value, PolyElement):
            return self.field.new(value)
        return self.field(value)

    def poly(self, value) -> Poly:
        f = self.rat(value)
        if f.denom.degree(0) > 0 or f.denom.degree(1) > 0 or any(
            f.denom.degree(i) > 0 for i in range(2, 2 + len(self.parameters))
        ):
            raise ValueError(f"{value!r} is not a polynomial")
        return f.numer.quo_ground(f.denom.LC)


VAR_INDEX = {"x": 0, "y": 1}


def var_index(var) -> int:
    return VAR_INDEX[var] if isinstance(var, str) else int(var)


def deg(p, var) -> float:
    """Degree in ``var``; -inf for zero.  Rational functions use the numerator."""
    if isinstance(p, FracElement):
        p = p.numer
    return p.degree(var_index(var))


def deg_vec(vec, var) -> float:
    return max((deg(c, var) for c in vec), default=NEG_INF)


def is_free_of(f, *vars) -> bool:
    """True if the polynomial or rational function does not involve ``vars``."""
    parts = (f.numer, f.denom) if isinstance(f, FracElement) else (f,)
    return all(p.degree(var_index(v)) <= 0 for p in parts for v in vars)


def is_poly_in(f: RatFunc, *vars) -> bool:
    """Denominator free of ``vars`` (f is a polynomial in them over the rest)."""
    return is_free_of(f.denom, *vars)


def is_constant(f) -> bool:
    """Element of K: free of x and y."""
    return is_free_of(f, "x", "y")


def exact_divide(a: Poly, b: Poly) -> Poly:
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    try:
        return a.exquo(b)
    except ExactQuotientFailed:
        raise InexactDivision("inexact division") from None


def pseudo_remainder(a: Poly, b: Poly, var) -> Poly:
    return a.prem(b, var_index(var))


def coefficients(p: Poly, var) -> dict[int, Poly]:
    """Map ``k -> coefficient of var^k``, coefficients free of ``var``."""
    idx = var_index(var)
    ring = p.ring
    groups: dict[int, dict] = {}
    for monom, coeff in p.terms():
        k = monom[idx]
        stripped = monom[:idx] + (0,) + monom[idx + 1:]
        groups.setdefault(k, {})[stripped] = coeff
    return {k: ring.from_dict(terms) for k, terms in groups.items()}


def rat_coefficients(f: RatFunc, var) -> dict[int, RatFunc]:
    """Coefficients of a rational function that is polynomial in ``var``."""
    if not is_poly_in(f, var):
        raise ValueError("not a polynomial in " + str(var))
    field = f.field
    return {k: field.new(c, f.denom) for k, c in coefficients(f.numer, var).items()}


def content(p: Poly, var) -> Poly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    if not p:
        return p
    coeffs = sorted(coefficients(p, var).values(), key=lambda c: len(c))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g == 1 or g == -1:
            break
        g = g.gcd(c)
    return g


def _positive(p: Poly) -> Poly:
    return -p if p and p.LC < 0 else p


def normalize(p: Poly, var) -> Poly:
    """Canonical associate over the field of the other variables.

    The result is primitive with respect to ``var`` (integer coefficients, no
    content depending only on the other variables) and has positive leading
    coefficient in lex order.
    """
    if not p:
        return p
    c = content(p, var)
    q = exact_divide(p, c) if c != 1 else p
    _, q = q.clear_denoms()
    q = q.primitive()[1]
    return _positive(q)


def poly_gcd(a: Poly, b: Poly, var) -> Poly:
    """gcd over K(other vars)[var], normalised as in :func:`normalize`."""
    if not a and not b:
        return a
    return normalize(a.gcd(b), var)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return a.ring.zero
    return _positive(exact_divide(a * b, a.gcd(b)))


def associated(a, b) -> bool:
    """a = lambda * b for some nonzero lambda in K."""
    if not a or not b:
        return not a and not b
    ratio = (a if isinstance(a, FracElement) else a.ring.to_field().new(a)) / (
        b if isinstance(b, FracElement) else b.ring.to_field().new(b)
    )
    return is_constant(ratio)


def prod(items, one):
    return reduce(lambda s, t: s * t, items, one)


def squarefree_decomposition(p: Poly, var) -> tuple[RatFunc, list[tuple[Poly, int]]]:
    """Yun's algorithm over K(other vars)[var].

    Returns ``(c, [(p_i, i), ...])`` with ``p = c * prod p_i^i``, each ``p_i``
    normalised, squarefree and pairwise coprime, ``c`` free of ``var``.
    Entries are ordered by increasing multiplicity.
    """
    if not p:
        raise ValueError("squarefree decomposition of zero")
    field = p.ring.to_field()
    idx = var_index(var)
    a = normalize(p, var)
    out: list[tuple[Poly, int]] = []
    if a.degree(idx) > 0:
        da = a.diff(a.ring.gens[idx])
        b = poly_gcd(a, da, var)
        c = exact_divide(a, b)
        d = exact_divide(da, b) - c.diff(a.ring.gens[idx])
        i = 1
        while c.degree(idx) > 0:
            ai = poly_gcd(c, d, var)
            c = exact_divide(c, ai)
            d = exact_divide(d, ai) - c.diff(a.ring.gens[idx])
            if ai.degree(idx) > 0:
                out.append((ai, i))
            i += 1
    rebuilt = prod((f**k for f, k in out), p.ring.one)
    const = field.new(p) / field.new(rebuilt)
    return const, out


def squarefree_part(p: Poly, var) -> Poly:
    _, parts = squarefree_decomposition(p, var)
    return prod((f for f, _ in parts), p.ring.one)


def factor_irreducible(p: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Irreducible factorisation over Q (parameters are treated as variables)."""
    c, facs = p.factor_list()
    return c, [(_positive(f), k) for f, k in facs]


def to_expr(f) -> str:
    """Render in the core expression grammar: explicit ``*``, ``^`` and parentheses."""
    if isinstance(f, FracElement):
        num, den = f.numer, f.denom
        if den.is_ground:
            c = den.LC
            num = num.quo_ground(c) if c != 1 else num
            return _poly_expr(num)
        return f"({_poly_expr(num)})/({_poly_expr(den)})"
    return _poly_expr(f)


def _poly_expr(p: Poly) -> str:
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    pieces = []
    for monom, coeff in p.terms():
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        neg = coeff < 0
        a = -coeff if neg else coeff
        num, den = int(a.numerator), int(a.denominator)
        if factors:
            head = "" if (num, den) == (1, 1) else (f"{num}/{den}*" if den != 1 else f"{num}*")
            body = head + "*".join(factors)
        else:
            body = f"{num}/{den}" if den != 1 else str(num)
        pieces.append((neg, body))
    first_neg, first = pieces[0]
    out = ("-" if first_neg else "") + first
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out
