"""D-finite systems given by multiplication matrices M = U/u, N = V/v."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .arith import (
    NEG_INF,
    RatFunc,
    deg,
    InexactDivision,
    deg_vec,
    exact_divide,
    is_poly_in,
    poly_lcm,
    squarefree_part,
)
from .gff import rising_factorial_power
from .ore import OreOperator, OreSpec


class InvalidSystem(ValueError):
    """Invalid D-finite system; ``check`` names the violated condition."""

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"{check}: {message}")


def _as_rat(spec, value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    return spec.fieldspec.rat(value)


@dataclass(frozen=True)
class DFiniteSystem:
    """Quotient A/a of dimension n with Dx b = (U/u) b, Dy b = (V/v) b.

    ``e`` represents 1 in the basis b; ``lifts`` optionally gives operators
    B_i with B_i . 1 = b_i.
    """

    spec: OreSpec
    u: RatFunc
    U: tuple
    v: RatFunc
    V: tuple
    e: tuple
    lifts: tuple | None = None

    def __post_init__(self):
        spec = self.spec
        conv = lambda val: _as_rat(spec, val)
        object.__setattr__(self, "u", conv(self.u))
        object.__setattr__(self, "v", conv(self.v))
        object.__setattr__(self, "U", tuple(tuple(conv(c) for c in row) for row in self.U))
        object.__setattr__(self, "V", tuple(tuple(conv(c) for c in row) for row in self.V))
        object.__setattr__(self, "e", tuple(conv(c) for c in self.e))
        if self.lifts is not None:
            object.__setattr__(self, "lifts", tuple(self.lifts))
        n = len(self.e)
        if n < 1:
            raise InvalidSystem("dimension", "n must be at least 1")
        for name in ("U", "V"):
            mat = getattr(self, name)
            if len(mat) != n or any(len(row) != n for row in mat):
                raise InvalidSystem("dimension", f"{name} must be {n}x{n}")
        if not self.u or not self.v:
            raise InvalidSystem("denominators", "u and v must be nonzero")
        for name in ("u", "v"):
            if not is_poly_in(getattr(self, name), "x", "y"):
                raise InvalidSystem("denominators", f"{name} must be a polynomial")
        for name in ("U", "V"):
            if not all(is_poly_in(c, "x", "y") for row in getattr(self, name) for c in row):
                raise InvalidSystem("denominators", f"{name} must have polynomial entries")
        if self.lifts is not None and len(self.lifts) != n:
            raise InvalidSystem("lifts", f"expected {n} lift operators")

    @classmethod
    def from_matrices(cls, spec: OreSpec, M, N, e, lifts=None) -> "DFiniteSystem":
        """Build from rational matrices, taking u, v as the lcm of the denominators."""
        M = [[_as_rat(spec, c) for c in row] for row in M]
        N = [[_as_rat(spec, c) for c in row] for row in N]
        ring = spec.field.ring
        field = spec.field

        def split(mat):
            den = ring.one
            for row in mat:
                for c in row:
                    den = poly_lcm(den, c.denom)
            d = field.new(den)
            return d, [[c * d for c in row] for row in mat]

        u, U = split(M)
        v, V = split(N)
        return cls(spec, u, U, v, V, e, lifts)

    @property
    def n(self) -> int:
        return len(self.e)

    @property
    def M(self):
        return tuple(tuple(c / self.u for c in row) for row in self.U)

    @property
    def N(self):
        return tuple(tuple(c / self.v for c in row) for row in self.V)

    def matrix(self, var: str):
        return self.M if var == "x" else self.N


def _mat_vec(w, mat):
    n = len(w)
    out = []
    for j in range(n):
        total = 0
        for i in range(n):
            if w[i] and mat[i][j]:
                total = total + w[i] * mat[i][j]
        out.append(total if total != 0 else mat[0][0].field.zero)
    return tuple(out)


def vector_apply(w, sys: DFiniteSystem, var: str):
    """D_var . w = sigma(w) * Mat + delta(w) for a row vector w."""
    spec = sys.spec
    if len(w) != sys.n:
        raise ValueError("vector length does not match the system dimension")
    sw = tuple(spec.sigma(c, var) for c in w)
    image = _mat_vec(sw, sys.matrix(var))
    if spec.delta_is_zero(var):
        return image
    return tuple(a + spec.delta(c, var) for a, c in zip(image, w))


def vector_apply_dx(w, sys: DFiniteSystem):
    return vector_apply(w, sys, "x")


def vector_apply_dy(w, sys: DFiniteSystem):
    return vector_apply(w, sys, "y")


def apply_operator(op: OreOperator, w, sys: DFiniteSystem):
    """Action of an Ore operator on a vector of the quotient module."""
    field = sys.spec.field
    total = [field.zero] * sys.n
    by_y = {}
    cur = tuple(w)
    for j in range(op.order_y + 1):
        by_y[j] = cur
        cur = vector_apply_dy(cur, sys)
    for j in range(op.order_y + 1):
        needed = [i for (i, jj) in op.terms if jj == j]
        if not needed:
            continue
        cur = by_y[j]
        top = max(needed)
        for i in range(top + 1):
            c = op.terms.get((i, j))
            if c:
                total = [t + c * a for t, a in zip(total, cur)]
            if i < top:
                cur = vector_apply_dx(cur, sys)
    return tuple(total)


@dataclass
class ValidationReport:
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, check: str, message: str):
        self.failures.append((check, message))

    def raise_if_failed(self):
        if self.failures:
            check, message = self.failures[0]
            raise InvalidSystem(check, message)

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(f"{c}: {m}" for c, m in self.failures)


def unit_vector(sys: DFiniteSystem, j: int):
    field = sys.spec.field
    return tuple(field.one if i == j else field.zero for i in range(sys.n))


def validate(sys: DFiniteSystem) -> ValidationReport:
    report = ValidationReport()
    if not any(sys.e):
        report.add("admissibility", "e must be nonzero")
    elif not all(is_poly_in(c, "x", "y") for c in sys.e):
        report.add("admissibility", "e must be a polynomial vector")
    for j in range(sys.n):
        unit = unit_vector(sys, j)
        xy = vector_apply_dx(vector_apply_dy(unit, sys), sys)
        yx = vector_apply_dy(vector_apply_dx(unit, sys), sys)
        if xy != yx:
            report.add("compatibility", f"DxDy - DyDx does not vanish on unit vector {j + 1}")
            break
    if sys.lifts is not None:
        for j, op in enumerate(sys.lifts):
            if op.spec != sys.spec:
                report.add("lifts", f"lift {j + 1} lives in a different algebra")
                continue
            if apply_operator(op, sys.e, sys) != unit_vector(sys, j):
                report.add("lifts", f"lift {j + 1} does not map 1 to basis element {j + 1}")
    spec = sys.spec
    if spec.x_kind == "derivation" and spec.y_kind == "derivation" and report.ok:
        u_red = reduced_denominator(sys.M)
        v_red = reduced_denominator(sys.N)
        su = squarefree_part(u_red, "y")
        sv = squarefree_part(v_red, "y")
        if su.degree(1) > 0 and not _divides(su, sv):
            report.add("prop2", "squarefree part of u does not divide that of v")
    return report


def _divides(a, b) -> bool:
    try:
        exact_divide(b, a)
    except InexactDivision:
        return False
    return True


def reduced_denominator(mat):
    """lcm of the reduced denominators of a rational matrix, made y-primitive."""
    ring = mat[0][0].field.ring
    den = ring.one
    for row in mat:
        for c in row:
            den = poly_lcm(den, c.denom)
    return den


@dataclass(frozen=True)
class IterateTable:
    """Dx^i e = rows[i] / fac(u, i, x) for i = 0..r.

    ``rescaled[i]`` is fac(sigma_x^i(u), r-i, x) * rows[i], i.e. the numerator
    over the common denominator ``common`` = fac(u, r, x).
    """

    r: int
    rows: tuple
    denominators: tuple
    rescaled: tuple
    common: RatFunc


def gamma_of(sys: DFiniteSystem) -> int:
    g = max([deg(sys.u, "y")] + [deg(c, "y") for row in sys.U for c in row])
    return max(int(g), 0) if g != NEG_INF else 0


def iterate_dx_e(sys: DFiniteSystem, r: int) -> IterateTable:
    """Numerators of Dx^i e over fac(u, i, x), with the degree bound asserted."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    spec = sys.spec
    field = spec.field
    u = sys.u
    gamma = gamma_of(sys)
    base = deg_vec(sys.e, "y")
    rows = [tuple(sys.e)]
    dens = [field.one]
    for i in range(r):
        w = rows[-1]
        fac_i = dens[-1]
        sw = tuple(spec.sigma(c, "x") for c in w)
        num = list(_mat_vec(sw, sys.U))
        if not spec.delta_is_zero("x"):
            sig_u = spec.sigma(u, "x", i)
            utilde = u * spec.delta(fac_i, "x") / fac_i
            if not is_poly_in(utilde, "x", "y"):
                raise AssertionError("u * delta(fac(u,i)) / fac(u,i) is not a polynomial")
            num = [a + sig_u * spec.delta(c, "x") - utilde * s for a, c, s in zip(num, w, sw)]
        row = tuple(num)
        if not all(is_poly_in(c, "y") for c in row):
            raise AssertionError("numerator of Dx^i e is not polynomial in y")
        bound = base + (i + 1) * gamma
        if deg_vec(row, "y") > bound:
            raise AssertionError(f"degree bound violated at i={i + 1}")
        rows.append(row)
        dens.append(fac_i * spec.sigma(u, "x", i))
    common = dens[-1]
    rescaled = []
    for i, row in enumerate(rows):
        factor = rising_factorial_power(spec.sigma(u, "x", i), r - i, "x", spec)
        rescaled.append(tuple(factor * c for c in row))
    return IterateTable(r, tuple(rows), tuple(dens), tuple(rescaled), common)


def companion_from_scalar(L: OreOperator):
    """(u, U, e) for the basis 1, Dx, ..., Dx^(n-1) of A/(L)."""
    if any(j for _, j in L.terms):
        raise ValueError("companion_from_scalar needs an operator in Dx only")
    n = L.order_x
    if n < 1:
        raise ValueError("operator must have order at least 1 in Dx")
    spec = L.spec
    field = spec.field
    lead = L.coefficient(n, 0)
    M = [[field.zero] * n for _ in range(n)]
    for i in range(n - 1):
        M[i][i + 1] = field.one
    for j in range(n):
        M[n - 1][j] = -L.coefficient(j, 0) / lead
    ring = field.ring
    den = ring.one
    for row in M:
        for c in row:
            den = poly_lcm(den, c.denom)
    u = field.new(den)
    U = tuple(tuple(c * u for c in row) for row in M)
    e = tuple(field.one if i == 0 else field.zero for i in range(n))
    return u, U, e
