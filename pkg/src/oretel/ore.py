"""Ore algebras K(x, y)[Dx, Dy] and their operators."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .arith import FieldSpec, Poly, RatFunc, deg, to_expr, var_index

KINDS = ("derivation", "shift", "forward_difference", "q_shift", "q_difference")
DEFAULT_ACTION = {
    "derivation": "delta",
    "shift": "sigma",
    "forward_difference": "delta",
    "q_shift": "sigma",
    "q_difference": "delta",
}
_SIGMA_ID = {"derivation"}
_Q_KINDS = {"q_shift", "q_difference"}
_DELTA_ZERO = {"shift", "q_shift"}


@dataclass(frozen=True)
class OreSpec:
    """Commuting pairs (sigma_x, delta_x), (sigma_y, delta_y).

    ``action`` fixes how Dx/Dy act on rational functions in
    :meth:`OreOperator.apply`: by sigma (only when delta = 0) or by delta.
    """

    fieldspec: FieldSpec
    x_kind: str
    y_kind: str
    x_action: str | None = None
    y_action: str | None = None

    def __post_init__(self):
        for var in "xy":
            kind = getattr(self, f"{var}_kind")
            if kind not in KINDS:
                raise ValueError(f"unknown Ore kind {kind!r} for {var}")
            if kind in _Q_KINDS and "q" not in self.fieldspec.parameters:
                raise ValueError(f"{kind} requires the parameter q to be declared")
            action = getattr(self, f"{var}_action") or DEFAULT_ACTION[kind]
            if action not in ("sigma", "delta"):
                raise ValueError(f"unknown action {action!r}")
            if action == "sigma" and kind not in _DELTA_ZERO:
                raise ValueError(f"D{var} cannot act by sigma for {kind}: delta is nonzero")
            object.__setattr__(self, f"{var}_action", action)

    @classmethod
    def of(cls, x_kind: str, y_kind: str, params=()) -> "OreSpec":
        return cls(FieldSpec(tuple(params)), x_kind, y_kind)

    @property
    def field(self):
        return self.fieldspec.field

    def kind(self, var: str) -> str:
        return self.x_kind if var == "x" else self.y_kind

    def sigma_is_identity(self, var: str) -> bool:
        return self.kind(var) in _SIGMA_ID

    def delta_is_zero(self, var: str) -> bool:
        return self.kind(var) in _DELTA_ZERO

    def delta_lowers_degree(self, var: str) -> bool:
        """deg(delta(p)) <= deg(p) - 1; fails only for the q-difference."""
        return self.kind(var) != "q_difference"

    def describe(self) -> str:
        return f"x: {self.x_kind}, y: {self.y_kind}"

    # -- sigma / delta -------------------------------------------------
    def sigma_poly(self, p: Poly, var: str, k: int = 1) -> Poly:
        """sigma_var^k(p) up to a unit of K (exact for k >= 0)."""
        kind = self.kind(var)
        if k == 0 or kind in _SIGMA_ID or not p:
            return p
        idx = var_index(var)
        gen = p.ring.gens[idx]
        if kind in _Q_KINDS:
            return _q_scale(p, idx, 2 + self.fieldspec.parameters.index("q"), k)[0]
        return p.compose(gen, gen + k)

    def sigma(self, f: RatFunc, var: str, k: int = 1) -> RatFunc:
        """sigma_var^k(f) for any integer k (k < 0 uses the inverse)."""
        kind = self.kind(var)
        if k == 0 or kind in _SIGMA_ID or not f:
            return f
        field = f.field
        if kind in _Q_KINDS:
            idx = var_index(var)
            qidx = 2 + self.fieldspec.parameters.index("q")
            num, a = _q_scale(f.numer, idx, qidx, k)
            den, b = _q_scale(f.denom, idx, qidx, k)
            qq = f.field.ring.gens[qidx]
            return field.new(num * qq**b, den * qq**a)
        gen = f.field.ring.gens[var_index(var)]
        return field.new(f.numer.compose(gen, gen + k), f.denom.compose(gen, gen + k))

    def delta(self, f: RatFunc, var: str) -> RatFunc:
        kind = self.kind(var)
        if kind in _DELTA_ZERO:
            return f.field.zero
        if kind == "derivation":
            return f.diff(f.field.gens[var_index(var)])
        return self.sigma(f, var) - f

    def act(self, f: RatFunc, var: str) -> RatFunc:
        """How Dvar acts on the rational-function test module."""
        action = self.x_action if var == "x" else self.y_action
        return self.sigma(f, var) if action == "sigma" else self.delta(f, var)

    def check_degree_assumptions(self, rng: random.Random | None = None, trials: int = 5) -> None:
        """Spot-check commutation and the degree assumptions on random polynomials."""
        rng = rng or random.Random(0)
        field = self.field
        ring = field.ring
        gens = ring.gens
        for _ in range(trials):
            p = ring.zero
            for _ in range(4):
                exps = [rng.randint(0, 2) for _ in gens]
                p += rng.randint(-5, 5) * ring.from_dict({tuple(exps): 1})
            if not p:
                continue
            f = field.new(p)
            for var, other in (("x", "y"), ("y", "x")):
                s = self.sigma(f, var)
                d = self.delta(f, var)
                assert s.denom.is_ground and d.denom.is_ground, "sigma/delta must preserve polynomials"
                assert deg(s, var) == deg(p, var) and deg(s, other) == deg(p, other)
                drop = 0 if self.kind(var) == "q_difference" else 1
                assert deg(d, var) <= deg(p, var) - drop and deg(d, other) <= deg(p, other)
            assert self.sigma(self.sigma(f, "x"), "y") == self.sigma(self.sigma(f, "y"), "x")
            assert self.delta(self.delta(f, "x"), "y") == self.delta(self.delta(f, "y"), "x")
            for g in gens[2:]:
                c = field.new(g)
                assert self.sigma(c, "x") == c and self.sigma(c, "y") == c


def _q_scale(p: Poly, idx: int, qidx: int, k: int) -> tuple[Poly, int]:
    """p(q^k v) = result / q^shift, returned as (result, shift)."""
    if not p:
        return p, 0
    top = p.degree(idx)
    offset = 0 if k >= 0 else -k * top
    terms = {}
    for monom, coeff in p.terms():
        m = list(monom)
        m[qidx] += k * monom[idx] + offset
        terms[tuple(m)] = coeff
    return p.ring.from_dict(terms), offset


class OreOperator:
    """sum c_{i,j} Dx^i Dy^j with rational-function coefficients on the left."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: OreSpec, terms: dict | None = None):
        self.spec = spec
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def scalar(cls, spec: OreSpec, f) -> "OreOperator":
        return cls(spec, {(0, 0): spec.field(f) if not isinstance(f, RatFunc) else f})

    @classmethod
    def dx(cls, spec: OreSpec) -> "OreOperator":
        return cls(spec, {(1, 0): spec.field.one})

    @classmethod
    def dy(cls, spec: OreSpec) -> "OreOperator":
        return cls(spec, {(0, 1): spec.field.one})

    @classmethod
    def from_coefficients_x(cls, spec: OreSpec, coeffs) -> "OreOperator":
        return cls(spec, {(i, 0): c for i, c in enumerate(coeffs)})

    def coefficient(self, i: int, j: int) -> RatFunc:
        return self.terms.get((i, j), self.spec.field.zero)

    @property
    def order_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def order_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def is_scalar(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def _coerce(self, other) -> "OreOperator":
        if isinstance(other, OreOperator):
            return other
        return OreOperator.scalar(self.spec, self.spec.field(other) if not isinstance(other, RatFunc) else other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return OreOperator(self.spec, terms)

    __radd__ = __add__

    def __neg__(self):
        return OreOperator(self.spec, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return op_multiply(self, self._coerce(other))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def left_scale(self, f: RatFunc) -> "OreOperator":
        return OreOperator(self.spec, {k: f * v for k, v in self.terms.items()})

    def _d_times(self, var: str) -> "OreOperator":
        """Dvar * self via Dvar a = sigma(a) Dvar + delta(a)."""
        spec = self.spec
        terms: dict = {}
        step = (1, 0) if var == "x" else (0, 1)
        for (i, j), c in self.terms.items():
            key = (i + step[0], j + step[1])
            terms[key] = terms.get(key, 0) + spec.sigma(c, var)
            d = spec.delta(c, var)
            if d:
                terms[(i, j)] = terms.get((i, j), 0) + d
        return OreOperator(spec, terms)

    def apply(self, f: RatFunc) -> RatFunc:
        return op_apply_rat(self, f)

    def to_expr(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "*".join(
                [f"Dx^{i}" if i > 1 else "Dx"] * (i > 0) + [f"Dy^{j}" if j > 1 else "Dy"] * (j > 0)
            )
            if not mono:
                pieces.append(f"({to_expr(c)})")
            elif c == 1:
                pieces.append(mono)
            else:
                pieces.append(f"({to_expr(c)})*{mono}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"OreOperator({self.to_expr()})"


def op_multiply(a: OreOperator, b: OreOperator, spec: OreSpec | None = None) -> OreOperator:
    spec = spec or a.spec
    if not a or not b:
        return OreOperator(spec)
    result: dict = {}
    by_y: dict[int, OreOperator] = {}
    current = b
    for j in range(a.order_y + 1):
        by_y[j] = current
        current = current._d_times("y")
    for j in range(a.order_y + 1):
        needed = sorted(i for (i, jj) in a.terms if jj == j)
        if not needed:
            continue
        current = by_y[j]
        for i in range(needed[-1] + 1):
            coeff = a.terms.get((i, j))
            if coeff:
                for k, v in current.terms.items():
                    result[k] = result.get(k, 0) + coeff * v
            if i < needed[-1]:
                current = current._d_times("x")
    return OreOperator(spec, result)


def op_apply_rat(a: OreOperator, f: RatFunc, spec: OreSpec | None = None) -> RatFunc:
    spec = spec or a.spec
    total = spec.field.zero
    by_y = {}
    g = f
    for j in range(a.order_y + 1):
        by_y[j] = g
        g = spec.act(g, "y")
    for j in range(a.order_y + 1):
        needed = [i for (i, jj) in a.terms if jj == j]
        if not needed:
            continue
        g = by_y[j]
        for i in range(max(needed) + 1):
            c = a.terms.get((i, j))
            if c:
                total += c * g
            g = spec.act(g, "x")
    return total


def right_division(a: OreOperator, b: OreOperator) -> tuple[OreOperator, OreOperator]:
    """(q, r) with a = q*b + r and ord r < ord b, for operators in Dx only."""
    if any(j for _, j in a.terms) or any(j for _, j in b.terms):
        raise ValueError("right_division works with operators in Dx only")
    if not b:
        raise ZeroDivisionError("division by the zero operator")
    spec = a.spec
    k = b.order_x
    lead = b.coefficient(k, 0)
    q = OreOperator(spec)
    r = a
    while r and r.order_x >= k:
        m = r.order_x
        c = r.coefficient(m, 0) / spec.sigma(lead, "x", m - k)
        term = OreOperator(spec, {(m - k, 0): c})
        q = q + term
        r = r - term * b
    return q, r
