"""Creative telescoping for proper D-finite systems.

For a fixed order r the ansatz T = t_0 + ... + t_r Dx^r and
c = (h/z) * w, with w a polynomial vector of y-degree at most s, turns
T.e = Dy.c into a homogeneous linear system over K(x).  Both sides share
the denominator fac(u, r, x), so comparing y-coefficients of the numerators
gives the equations.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field as dc_field

from .arith import NEG_INF, RatFunc, deg, deg_vec, is_poly_in, rat_coefficients
from .gff import fac_poly, gff
from .linalg import echelon_on_prefix, make_polynomial, nullspace
from .ore import OreOperator
from .properness import NotProper, OrbitAnalysis, Witness, eta_profile
from .system import (
    DFiniteSystem,
    apply_operator,
    gamma_of,
    iterate_dx_e,
    vector_apply_dx,
    vector_apply_dy,
)

log = logging.getLogger(__name__)


class TelescopeFailure(ArithmeticError):
    """No telescoper with nonzero T up to r_max; ``diagnostics`` has the details."""

    def __init__(self, message: str, diagnostics: dict):
        self.diagnostics = diagnostics
        super().__init__(message)


@dataclass
class TelescopePair:
    T: OreOperator
    c: tuple
    C_operator: OreOperator | None = None
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.T.order_x


@dataclass
class AnsatzPlan:
    r: int
    s: int
    s_clamped: bool
    z: RatFunc
    h: RatFunc
    d: RatFunc
    witness: Witness


@dataclass
class _Context:
    """Per-system data shared by every order r of the search."""

    sys: DFiniteSystem
    analysis: OrbitAnalysis
    eta: int
    height: int
    gamma: int
    phi: int

    @property
    def bound(self) -> int:
        return self.sys.n * self.height + self.phi


def _context(sys: DFiniteSystem, phi: int | None) -> _Context:
    from .properness import _v_term, phi_bound

    analysis = OrbitAnalysis(sys)
    if not analysis.is_proper():
        raise NotProper("system is not y-proper; no order bound is available")
    eta, _ = eta_profile(sys, analysis)
    height = max(eta + _v_term(sys), 0)
    return _Context(sys, analysis, eta, height, gamma_of(sys), phi_bound(sys, phi))


def order_bound(sys: DFiniteSystem, phi: int | None = None) -> int:
    """n * height + phi."""
    return _context(sys, phi).bound


def degree_bound_s(deg_e: int, gamma: int, height: int, r: int) -> tuple[int, bool]:
    """s = deg_y(e) + r*gamma - height, clamped at 0; the flag reports clamping."""
    s = deg_e + r * gamma - height
    return (s, False) if s >= 0 else (0, True)


def _deg_e(sys: DFiniteSystem) -> int:
    d = deg_vec(sys.e, "y")
    return int(d) if d != NEG_INF else 0


def build_z(sys: DFiniteSystem, r: int, ctx: _Context | None = None) -> AnsatzPlan:
    """Certificate denominator z and numerator factor h for order r."""
    ctx = ctx or _context(sys, None)
    spec = sys.spec
    field = spec.field
    w = ctx.analysis.witness(r)
    top = field.one
    for f, p, q in zip(w.f, w.p, w.q):
        top *= field.new(fac_poly(spec.sigma_poly(f, "y", q - 1), p - q, "y", spec))
    g = w.g
    if g.numer.degree(1) > 0:
        dec = gff(g.numer, "y", spec)
        right, left = dec.right_border, dec.left_border
    else:
        right = left = field.ring.one
    z = top * g / field.new(right)
    if not is_poly_in(z, "y"):
        raise AssertionError("z is not a polynomial in y")
    lhs = w.d * spec.sigma(w.h, "y")
    rhs = spec.sigma(z, "y") * sys.v * field.new(left)
    if lhs != rhs:
        raise AssertionError("d * sigma_y(h) != sigma_y(z) * v * left border of g")
    s, clamped = degree_bound_s(_deg_e(sys), ctx.gamma, ctx.height, r)
    return AnsatzPlan(r, s, clamped, z, w.h, w.d, w)


def _coeff_column(vec, top: int, field) -> list:
    """Stack y-coefficients 0..top of each coordinate into one column."""
    col = []
    for entry in vec:
        coeffs = rat_coefficients(entry, "y") if entry else {}
        if coeffs and max(coeffs) > top:
            raise AssertionError("y-degree exceeds the equation range")
        col.extend(coeffs.get(j, field.zero) for j in range(top + 1))
    return col


def _assemble(ctx: _Context, r: int):
    sys = ctx.sys
    spec = sys.spec
    field = spec.field
    n = sys.n
    table = iterate_dx_e(sys, r)
    plan = build_z(sys, r, ctx)
    if table.common != plan.d:
        raise AssertionError("iterate denominator differs from fac(u, r, x)")
    # s + height when s was clamped, deg_y(e) + r*gamma otherwise
    top = max(_deg_e(sys) + r * ctx.gamma, plan.s + ctx.height)
    t_vectors = list(table.rescaled)
    base = plan.h / plan.z
    y = field.gens[1]
    c_vectors = []
    for k in range(n):
        for j in range(plan.s + 1):
            vec = tuple(base * y**j if i == k else field.zero for i in range(n))
            image = tuple(plan.d * a for a in vector_apply_dy(vec, sys))
            if not all(is_poly_in(a, "y") for a in image):
                raise AssertionError("d * Dy(c) is not polynomial in y")
            c_vectors.append(image)
    actual = max(int(max(deg_vec(v, "y"), 0)) for v in t_vectors + c_vectors)
    if actual > top:
        if spec.delta_lowers_degree("y"):
            raise AssertionError("Dy image exceeds the degree bound s + height")
        top = actual
    columns = [_coeff_column(v, top, field) for v in t_vectors]
    columns += [[-a for a in _coeff_column(v, top, field)] for v in c_vectors]
    rows = [list(row) for row in zip(*columns)]
    return rows, plan, len(columns), n * (top + 1)


def _t_order(vec, r: int) -> int:
    return max((i for i in range(r + 1) if vec[i]), default=-1)


def _total_degree(vec) -> int:
    return sum(max(int(deg(c, "x")), 0) for c in vec if c)


def _normalize_solution(vec, r: int, field):
    """Scale so that T has coprime integer polynomial coefficients, leading one positive."""
    top = _t_order(vec, r)
    t_part = make_polynomial(vec[: r + 1], field)
    factor = t_part[top] / vec[top]
    if t_part[top].numer.LC < 0:
        factor = -factor
    return tuple(factor * c for c in vec)


def _pair_from_vector(ctx: _Context, plan: AnsatzPlan, vec, r: int) -> TelescopePair:
    sys = ctx.sys
    field = sys.spec.field
    y = field.gens[1]
    T = OreOperator.from_coefficients_x(sys.spec, vec[: r + 1])
    base = plan.h / plan.z
    c = []
    for k in range(sys.n):
        chunk = vec[r + 1 + k * (plan.s + 1): r + 1 + (k + 1) * (plan.s + 1)]
        c.append(base * sum((cj * y**j for j, cj in enumerate(chunk)), field.zero))
    C = certificate_as_operator(sys, tuple(c)) if sys.lifts is not None else None
    return TelescopePair(T, tuple(c), C)


def telescope(
    sys: DFiniteSystem,
    phi: int | None = None,
    r_start: int = 1,
    r_max: int | None = None,
    incremental: bool = True,
) -> TelescopePair:
    """Search for (T, c) with T.e = Dy.c, raising the order up to r_max."""
    if r_start < 0:
        raise ValueError("r_start must be nonnegative")
    ctx = _context(sys, phi)
    if r_max is None:
        r_max = ctx.bound
    if not incremental:
        r_start = r_max
    diag = {
        "eta": ctx.eta,
        "gamma": ctx.gamma,
        "height": ctx.height,
        "phi": ctx.phi,
        "bound": ctx.bound,
        "n": sys.n,
    }
    field = sys.spec.field
    for r in range(r_start, r_max + 1):
        t0 = time.perf_counter()
        rows, plan, ncols, neq = _assemble(ctx, r)
        basis = nullspace(rows, field, ncols)
        with_t, _ = echelon_on_prefix(basis, r + 1, field)
        log.info("r=%d: %d equations, %d unknowns, nullity %d", r, neq, ncols, len(basis))
        if not with_t:
            continue
        candidates = [_normalize_solution(v, r, field) for v in with_t]
        candidates.sort(key=lambda v: (_t_order(v, r), _total_degree(v), [str(c) for c in v]))
        pair = _pair_from_vector(ctx, plan, candidates[0], r)
        pair.diagnostics = dict(
            diag,
            r=r,
            s=plan.s,
            s_clamped=plan.s_clamped,
            equations=neq,
            unknowns=ncols,
            nullity=len(basis),
            elapsed=time.perf_counter() - t0,
        )
        if not verify_pair(sys, pair):
            raise AssertionError("telescoping pair failed verification")
        return pair
    raise TelescopeFailure(
        f"no telescoper with nonzero T for r <= {r_max}", dict(diag, r_start=r_start, r_max=r_max)
    )


def verify_pair(sys: DFiniteSystem, pair: TelescopePair) -> bool:
    """T.e - Dy.c == 0, evaluated by repeated application of Dx to e."""
    T = pair.T
    if not T or any(j for _, j in T.terms):
        return False
    if len(pair.c) != sys.n:
        return False
    field = sys.spec.field
    total = [field.zero] * sys.n
    cur = tuple(sys.e)
    for i in range(T.order_x + 1):
        t = T.coefficient(i, 0)
        if t:
            total = [a + t * b for a, b in zip(total, cur)]
        if i < T.order_x:
            cur = vector_apply_dx(cur, sys)
    image = vector_apply_dy(tuple(pair.c), sys)
    return all(a == b for a, b in zip(total, image))


def certificate_as_operator(sys: DFiniteSystem, c) -> OreOperator:
    """C = sum c_i B_i using the lift operators of the basis."""
    if sys.lifts is None:
        raise ValueError("certificate available as vector only")
    result = OreOperator(sys.spec)
    for ci, B in zip(c, sys.lifts):
        if ci:
            result = result + B.left_scale(ci)
    if apply_operator(result, sys.e, sys) != tuple(c):
        raise AssertionError("lifted certificate does not map 1 to c")
    return result
