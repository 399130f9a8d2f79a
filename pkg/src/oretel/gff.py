"""Rising factorial powers, greatest factorial factorisation and borders."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    Poly,
    RatFunc,
    exact_divide,
    is_free_of,
    normalize,
    poly_gcd,
    prod,
    squarefree_decomposition,
    var_index,
)
from .ore import OreSpec


def rising_factorial_power(a: RatFunc, i: int, var: str, spec: OreSpec) -> RatFunc:
    """fac(a, i) = a * sigma(a) * ... * sigma^(i-1)(a)."""
    if i < 0:
        raise ValueError("rising factorial power needs i >= 0")
    result = a.field.one
    for j in range(i):
        result *= spec.sigma(a, var, j)
    return result


def fac_poly(p: Poly, i: int, var: str, spec: OreSpec) -> Poly:
    """Rising factorial power of a polynomial, as a polynomial (exact)."""
    result = p.ring.one
    for j in range(i):
        result *= spec.sigma_poly(p, var, j)
    return result


@dataclass(frozen=True)
class GFFDecomposition:
    """p = content * prod fac(p_i, i); factors are (p_i, i) with i increasing."""

    content: RatFunc
    factors: tuple[tuple[Poly, int], ...]
    var: str
    spec: OreSpec

    def reassemble(self) -> RatFunc:
        total = self.content
        for p, i in self.factors:
            total *= self.content.field.new(fac_poly(p, i, self.var, self.spec))
        return total

    @property
    def left_border(self) -> Poly:
        return prod((p for p, _ in self.factors), self.content.field.ring.one)

    @property
    def right_border(self) -> Poly:
        return prod(
            (self.spec.sigma_poly(p, self.var, i - 1) for p, i in self.factors),
            self.content.field.ring.one,
        )


def _q_monomial_part(p: Poly, var: str) -> tuple[int, Poly]:
    """Split off the largest power of ``var``: the only sigma-fixed factor for q-shifts."""
    idx = var_index(var)
    a = min(m[idx] for m in p.monoms())
    if a == 0:
        return 0, p
    return a, exact_divide(p, p.ring.gens[idx] ** a)


def gff(p: Poly, var: str, spec: OreSpec) -> GFFDecomposition:
    """Greatest factorial factorisation of ``p`` w.r.t. sigma_var.

    Greedy: the largest index m admitting a nonconstant q with fac(q, m) | p is
    found via q_m = gcd(p, sigma^-1 p, ..., sigma^-(m-1) p); that q is removed
    and the process repeats on the cofactor.
    """
    if not p:
        raise ValueError("gff of the zero polynomial")
    field = p.ring.to_field()
    idx = var_index(var)
    if spec.sigma_is_identity(var):
        content, parts = squarefree_decomposition(p, var)
        return GFFDecomposition(content, tuple(parts), var, spec)

    found: dict[int, Poly] = {}
    rest = normalize(p, var)
    fixed_power = 0
    if spec.kind(var) in ("q_shift", "q_difference"):
        fixed_power, rest = _q_monomial_part(rest, var)
    while rest.degree(idx) > 0:
        g = rest
        m = 1
        while True:
            nxt = poly_gcd(g, spec.sigma_poly(rest, var, -m), var)
            if nxt.degree(idx) <= 0:
                break
            g, m = nxt, m + 1
        q = normalize(g, var)
        assert m not in found, "greedy GFF produced a repeated index"
        found[m] = q
        rest = exact_divide(rest, fac_poly(q, m, var, spec))
    if fixed_power:
        y = p.ring.gens[idx]
        found[fixed_power] = found.get(fixed_power, p.ring.one) * y
    factors = tuple((found[m], m) for m in sorted(found))
    rebuilt = prod((fac_poly(q, m, var, spec) for q, m in factors), p.ring.one)
    content = field.new(p) / field.new(rebuilt)
    if not is_free_of(content, var):
        raise AssertionError("gff content is not free of " + var)
    return GFFDecomposition(content, factors, var, spec)


def left_border(p: Poly, var: str, spec: OreSpec) -> Poly:
    return gff(p, var, spec).left_border


def right_border(p: Poly, var: str, spec: OreSpec) -> Poly:
    return gff(p, var, spec).right_border
