"""y-properness, the height of a system and the witness decompositions behind it.

Irreducible factors of u and v are located on sigma_y-orbits.  A factor
psi of u satisfies a relation sigma_x^s(psi) ~ sigma_y^t(psi) when one
exists, which places every sigma_x^k(psi) on a known orbit position.  The
left border of fac(u, r, x) and the minimal witness decomposition then
reduce to counting run starts of integer multisets.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ

from .arith import (
    NEG_INF,
    Poly,
    RatFunc,
    associated,
    coefficients,
    deg,
    factor_irreducible,
    is_constant,
    is_poly_in,
    normalize,
    prod,
    var_index,
)
from .gff import fac_poly, gff, rising_factorial_power
from .ore import OreSpec
from .system import DFiniteSystem, gamma_of


class NotProper(ValueError):
    pass


# -- orbits ------------------------------------------------------------------

def orbit_offset(a: Poly, b: Poly, var: str, spec: OreSpec) -> int | None:
    """Integer j with sigma_var^j(a) ~ b (equal up to a unit of K), else None."""
    idx = var_index(var)
    D = a.degree(idx)
    if D != b.degree(idx) or D <= 0:
        return 0 if D <= 0 and associated(a, b) else None
    kind = spec.kind(var)
    if spec.sigma_is_identity(var):
        return 0 if associated(a, b) else None
    field = a.ring.to_field()
    A = {k: field.new(c) for k, c in coefficients(a, var).items()}
    B = {k: field.new(c) for k, c in coefficients(b, var).items()}
    lam = B[D] / A[D]
    if not is_constant(lam):
        return None
    if kind in ("shift", "forward_difference"):
        j = ((B.get(D - 1, 0) / lam) - A.get(D - 1, field.zero)) / (D * A[D])
        if not (j.numer.is_ground and j.denom.is_ground):
            return None
        jq = j.numer.LC / j.denom.LC
        if jq.denominator != 1:
            return None
        j = int(jq)
    else:
        lower = [k for k in A if k < D]
        if not lower:
            return 0 if associated(a, b) else None
        k0 = min(lower)
        if k0 not in B:
            return None
        rho = lam / (B[k0] / A[k0])
        e = _q_power(rho, spec)
        if e is None or e % (D - k0):
            return None
        j = e // (D - k0)
    return j if associated(spec.sigma_poly(a, var, j), b) else None


def _q_power(f: RatFunc, spec: OreSpec) -> int | None:
    """e with f == q^e, else None."""
    if len(f.numer.terms()) != 1 or len(f.denom.terms()) != 1:
        return None
    qidx = 2 + spec.fieldspec.parameters.index("q")
    e = f.numer.degree(qidx) - f.denom.degree(qidx)
    q = f.field.gens[qidx]
    return e if f == q**e else None


def is_sigma_fixed(p: Poly, var: str, spec: OreSpec) -> bool:
    return associated(spec.sigma_poly(p, var, 1), p)


class OrbitTable:
    """Canonical representatives of sigma_y-orbits of irreducible polynomials."""

    def __init__(self, spec: OreSpec):
        self.spec = spec
        self.reps: list[Poly] = []
        self.collapsed: list[bool] = []

    def locate(self, f: Poly) -> tuple[int, int]:
        for k, rep in enumerate(self.reps):
            j = orbit_offset(rep, f, "y", self.spec)
            if j is not None:
                return k, 0 if self.collapsed[k] else j
        self.reps.append(normalize(f, "y"))
        self.collapsed.append(is_sigma_fixed(f, "y", self.spec))
        return len(self.reps) - 1, 0

    def member(self, orbit: int, pos: int) -> Poly:
        return normalize(self.spec.sigma_poly(self.reps[orbit], "y", pos), "y")

    def degree(self, orbit: int) -> int:
        return self.reps[orbit].degree(1)


def _rational_constant(f: RatFunc):
    """f as a Python Fraction when it is a rational number, else None."""
    from fractions import Fraction

    if not (f.numer.is_ground and f.denom.is_ground):
        return None
    val = f.numer.LC / f.denom.LC if f.numer else 0
    return Fraction(int(val.numerator), int(val.denominator)) if val else Fraction(0)


def _top_xy_part(psi: Poly) -> tuple[int, dict]:
    """Total x,y-degree and the coefficients (in K) of the top homogeneous part."""
    field = psi.ring.to_field()
    top = max(m[0] + m[1] for m in psi.monoms())
    H: dict = {}
    for m, c in psi.terms():
        if m[0] + m[1] == top:
            rest = (0, 0) + tuple(m[2:])
            H[(m[0], m[1])] = H.get((m[0], m[1]), field.zero) + field.new(psi.ring({rest: c}))
    return top, H


def _direction_candidates(psi: Poly, spec: OreSpec) -> list[int]:
    """Candidate s for a relation sigma_x^s(psi) ~ sigma_y^t(psi)."""
    shiftish = ("shift", "forward_difference")
    qish = ("q_shift", "q_difference")
    cands = {1}
    if spec.x_kind in shiftish and spec.y_kind in shiftish:
        # top part lam * (alpha x + beta y)^D gives s = |beta|
        top, H = _top_xy_part(psi)
        if (top, 0) in H and (top - 1, 1) in H:
            ratio = _rational_constant(H[(top - 1, 1)] / (top * H[(top, 0)]))
            if ratio is not None and ratio:
                cands.add(abs(ratio.numerator))
    elif spec.x_kind in qish and spec.y_kind in qish:
        points = sorted({(m[0], m[1]) for m in psi.monoms()})
        if len(points) >= 2:
            (i1, j1), (i2, j2) = points[0], points[-1]
            g = math.gcd(i1 - i2, j1 - j2)
            if j1 != j2:
                cands.add(abs(j1 - j2) // g)
    return sorted(cands)


def find_relation(psi: Poly, spec: OreSpec) -> tuple[int, int] | None:
    """Smallest (s, t) with s >= 1 and sigma_x^s(psi) ~ sigma_y^t(psi)."""
    for s in _direction_candidates(psi, spec):
        t = orbit_offset(psi, spec.sigma_poly(psi, "x", s), "y", spec)
        if t is not None:
            return s, t
    return None


def _starts(counter: Counter, collapsed: bool) -> int:
    if collapsed:
        return 1 if sum(counter.values()) > 0 else 0
    total = 0
    for pos, m in counter.items():
        if m > 0:
            total += max(0, m - counter.get(pos - 1, 0))
    return total


@dataclass
class Witness:
    """fac(u, r, x) = g * prod fac(f_i, p_i, y) and v = sigma_y(h) * prod fac(f_i, q_i, y)."""

    r: int
    f: tuple
    p: tuple
    q: tuple
    g: RatFunc
    h: RatFunc
    d: RatFunc
    g_left_border: Poly

    @property
    def eta(self) -> int:
        return max(int(self.g_left_border.degree(1)), 0)


class OrbitAnalysis:
    """Orbit bookkeeping for u (under sigma_x^k) and v of a system."""

    def __init__(self, sys: DFiniteSystem):
        self.sys = sys
        spec = self.spec = sys.spec
        self.table = OrbitTable(spec)
        self.u_factors: list[tuple[Poly, int]] = []
        self.relations: dict[int, tuple[int, int] | None] = {}
        self.classification: list[tuple[Poly, str]] = []
        self.base_positions: dict[int, list[tuple[int, int]]] = {}
        _, facs = factor_irreducible(sys.u.numer)
        for psi, m in facs:
            dx, dy = psi.degree(0), psi.degree(1)
            if dy <= 0:
                self.classification.append((psi, "x-only"))
                continue
            k = len(self.u_factors)
            self.u_factors.append((psi, m))
            rel = find_relation(psi, spec)
            self.relations[k] = rel
            if rel is None:
                self.classification.append((psi, "blocking"))
                continue
            if dx <= 0:
                self.classification.append((psi, "y-only"))
            else:
                self.classification.append((psi, "integer-linear"))
            s, _ = rel
            self.base_positions[k] = [self.table.locate(spec.sigma_poly(psi, "x", i)) for i in range(s)]
        self.v_positions: list[tuple[int, int, int]] = []
        _, vfacs = factor_irreducible(sys.v.numer)
        for phi, m in vfacs:
            if phi.degree(1) <= 0:
                continue
            orbit, pos = self.table.locate(phi)
            self.v_positions.append((orbit, pos, m))

    @property
    def all_related(self) -> bool:
        return all(rel is not None for rel in self.relations.values())

    def d_multiset(self, r: int) -> dict[int, Counter]:
        out: dict[int, Counter] = {}
        for k, (psi, m) in enumerate(self.u_factors):
            s, t = self.relations[k]
            for kk in range(r):
                orbit, base = self.base_positions[k][kk % s]
                pos = 0 if self.table.collapsed[orbit] else base + (kk // s) * t
                out.setdefault(orbit, Counter())[pos] += m
        return out

    def v_multiset(self) -> dict[int, Counter]:
        out: dict[int, Counter] = {}
        for orbit, pos, m in self.v_positions:
            out.setdefault(orbit, Counter())[pos] += m
        return out

    def left_border_degree(self, r: int) -> int:
        total = 0
        for orbit, counter in self.d_multiset(r).items():
            total += self.table.degree(orbit) * _starts(counter, self.table.collapsed[orbit])
        return total

    def is_proper(self) -> bool:
        if not self.all_related:
            return False
        if not self.u_factors:
            return True
        L = 1
        for s, _ in self.relations.values():
            L = L * s // math.gcd(L, s)
        span = max(
            [abs(b) for bases in self.base_positions.values() for _, b in bases]
            + [abs(t) for _, t in self.relations.values()]
            + [0]
        )
        r0 = L * (span + 3)
        values = {self.left_border_degree(r0 + i * L) for i in range(3)}
        return len(values) == 1

    def runs(self, r: int):
        """Optimal witness as runs (orbit, start, length) plus the leftover multiset."""
        D = self.d_multiset(r)
        W = self.v_multiset()
        runs = []
        for orbit in sorted(D):
            counter = D[orbit]
            anchors = W.get(orbit, Counter())
            if self.table.collapsed[orbit]:
                total = sum(counter.values())
                if total and sum(anchors.values()):
                    runs.append((orbit, 0, total))
                    counter.clear()
                continue
            for a in sorted(anchors):
                avail = anchors[a]
                while avail > 0 and counter.get(a, 0) - counter.get(a - 1, 0) >= 1:
                    b = a + 1
                    while counter.get(b, 0) - counter.get(b - 1, 0) >= 0 and counter.get(b, 0) > 0:
                        b += 1
                    for pos in range(a, b):
                        counter[pos] -= 1
                    runs.append((orbit, a, b - a))
                    avail -= 1
        leftover = {o: +c for o, c in D.items()}
        return runs, leftover

    def eta_at(self, r: int) -> int:
        _, leftover = self.runs(r)
        return sum(
            self.table.degree(o) * _starts(c, self.table.collapsed[o]) for o, c in leftover.items()
        )

    def witness(self, r: int) -> Witness:
        """Polynomial witness for fac(u, r, x) against v, checked by reassembly."""
        spec = self.spec
        field = spec.field
        ring = field.ring
        runs, _ = self.runs(r)
        d = rising_factorial_power(self.sys.u, r, "x", spec)
        fs, ps, qs = [], [], []
        for orbit, start, length in runs:
            fs.append(self.table.member(orbit, start))
            ps.append(length)
            qs.append(1)
        d_part = prod((field.new(fac_poly(f, p, "y", spec)) for f, p in zip(fs, ps)), field.one)
        v_part = prod((field.new(fac_poly(f, q, "y", spec)) for f, q in zip(fs, qs)), field.one)
        g = d / d_part
        sigma_h = self.sys.v / v_part
        if not (is_poly_in(g, "x", "y") and is_poly_in(sigma_h, "x", "y")):
            raise AssertionError("witness decomposition is not polynomial")
        h = spec.sigma(sigma_h, "y", -1)
        if not is_poly_in(h, "x", "y"):
            raise AssertionError("h is not a polynomial")
        if g.numer.degree(1) > 0:
            lb = gff(g.numer, "y", spec).left_border
        else:
            lb = ring.one
        w = Witness(r, tuple(fs), tuple(ps), tuple(qs), g, h, d, lb)
        check_witness(self.sys, w)
        expected = self.eta_at(r)
        if w.eta != expected:
            raise AssertionError(f"witness left border degree {w.eta} != orbit count {expected}")
        return w


def check_witness(sys: DFiniteSystem, w: Witness) -> None:
    """Exact reassembly of both factorisations and p_i >= q_i >= 1."""
    spec = sys.spec
    field = spec.field
    if not all(p >= q >= 1 for p, q in zip(w.p, w.q)):
        raise AssertionError("witness exponents must satisfy p_i >= q_i >= 1")
    d_rebuilt = w.g
    v_rebuilt = spec.sigma(w.h, "y")
    for f, p, q in zip(w.f, w.p, w.q):
        d_rebuilt *= field.new(fac_poly(f, p, "y", spec))
        v_rebuilt *= field.new(fac_poly(f, q, "y", spec))
    if d_rebuilt != rising_factorial_power(sys.u, w.r, "x", spec):
        raise AssertionError("fac(u, r, x) does not reassemble")
    if v_rebuilt != sys.v:
        raise AssertionError("v does not reassemble")


# -- public operations -------------------------------------------------------

@dataclass
class PropernessReport:
    proper: bool
    eta: int | None
    gamma: int
    height: int | None
    phi_bound: int
    factor_classification: list
    witness: Witness | None
    upper_bound_only: bool = False
    reason: str = ""


def is_y_proper(u, spec: OreSpec) -> tuple[bool, list]:
    """Decide whether deg_y of the left border of fac(u, r, x) stays bounded.

    Returns the verdict together with the factor classification as certificate.
    """
    sys = _probe_system(u, spec)
    analysis = OrbitAnalysis(sys)
    return analysis.is_proper(), analysis.classification


def _probe_system(u, spec: OreSpec) -> DFiniteSystem:
    field = spec.field
    u = u if isinstance(u, RatFunc) else (field.new(u) if isinstance(u, Poly) else spec.fieldspec.rat(u))
    return DFiniteSystem(spec, u, [[field.one]], field.one, [[field.zero]], [field.one])


def _as_integer_linear(f: Poly):
    """(a, b, c, lam) with f = lam * (a*x + b*y + c), or None."""
    field = f.ring.to_field()
    if max(m[0] + m[1] for m in f.monoms()) != 1:
        return None
    coeff = {0: field.zero, 1: field.zero}
    rest = field.zero
    for m, c in f.terms():
        term = field.new(f.ring({m: c}))
        if m[0] == 1:
            coeff[0] += term / field.gens[0]
        elif m[1] == 1:
            coeff[1] += term / field.gens[1]
        else:
            rest += term
    fa, fb = _rational_constant(coeff[0]), _rational_constant(coeff[1])
    if fa is None or fb is None or (fa == 0 and fb == 0):
        return None
    den = math.lcm(fa.denominator, fb.denominator)
    ia, ib = int(fa * den), int(fb * den)
    g = math.gcd(ia, ib)
    ia, ib = ia // g, ib // g
    lam = Fraction(g, den)
    if ia < 0 or (ia == 0 and ib < 0):
        ia, ib, lam = -ia, -ib, -lam
    c = rest / field(QQ(lam.numerator, lam.denominator))
    return ia, ib, c, lam


def integer_linear_decompose(p: Poly):
    """Extract factors a*x + b*y + c with coprime integers a, b (a > 0, or a = 0 < b).

    Returns ``([((a, b, c), multiplicity), ...], remainder)``.
    """
    const, facs = factor_irreducible(p)
    found = []
    remainder = p.ring(const)
    for f, m in facs:
        parsed = _as_integer_linear(f)
        if parsed is None:
            remainder *= f**m
            continue
        a, b, c, lam = parsed
        found.append(((a, b, c), m))
        remainder *= p.ring(QQ(lam.numerator, lam.denominator)) ** m
    found.sort(key=lambda item: (-item[0][0], -abs(item[0][1]), str(item[0][2])))
    return found, remainder


def compute_gamma(sys: DFiniteSystem) -> int:
    return gamma_of(sys)


def _v_term(sys: DFiniteSystem) -> int:
    dv = deg(sys.v, "y")
    dV = max(deg(c, "y") for row in sys.V for c in row)
    best = max(dv - 1 if dv != NEG_INF else NEG_INF, dV)
    return int(best) if best != NEG_INF else 0


def eta_profile(sys: DFiniteSystem, analysis: OrbitAnalysis | None = None, horizon: int | None = None):
    """eta = max over r in 1..horizon of the minimal left-border degree of g."""
    analysis = analysis or OrbitAnalysis(sys)
    if not analysis.is_proper():
        raise NotProper("system is not y-proper")
    n = sys.n
    eta = max(analysis.eta_at(1), 0)
    while True:
        height = max(eta + _v_term(sys), 0)
        target = horizon or (n * height + n)
        L = 1
        for s, _ in analysis.relations.values():
            L = L * s // math.gcd(L, s)
        top = max(target, 3 * L + 3)
        new = max(analysis.eta_at(r) for r in range(1, top + 1))
        if new <= eta:
            return eta, top
        eta = new


def compute_eta(sys: DFiniteSystem) -> int:
    analysis = OrbitAnalysis(sys)
    eta, top = eta_profile(sys, analysis)
    for r in sorted({1, sys.n * max(eta + _v_term(sys), 0) + sys.n}):
        if analysis.witness(r).eta > eta:
            raise AssertionError("witness exceeds the computed eta")
    return eta


def compute_height(sys: DFiniteSystem, eta: int | None = None) -> int:
    if eta is None:
        eta = compute_eta(sys)
    return max(eta + _v_term(sys), 0)


def phi_bound(sys: DFiniteSystem, override: int | None = None) -> int:
    if override is None:
        return sys.n
    if override < 0 or override > sys.n:
        raise ValueError(f"phi override must lie in 0..{sys.n}")
    return override


def properness_report(sys: DFiniteSystem, phi_override: int | None = None) -> PropernessReport:
    analysis = OrbitAnalysis(sys)
    gamma = compute_gamma(sys)
    phi = phi_bound(sys, phi_override)
    if not analysis.is_proper():
        reason = (
            "a factor of u has no relation sigma_x^s ~ sigma_y^t"
            if not analysis.all_related
            else "left borders of fac(u, r, x) grow with r"
        )
        return PropernessReport(False, None, gamma, None, phi, analysis.classification, None, reason=reason)
    eta, _ = eta_profile(sys, analysis)
    height = max(eta + _v_term(sys), 0)
    witness = analysis.witness(1)
    analysis.witness(sys.n * height + sys.n)
    return PropernessReport(True, eta, gamma, height, phi, analysis.classification, witness)
