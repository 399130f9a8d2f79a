import pytest

import builders
import oracles
from oretel.arith import associated
from oretel.gff import fac_poly, left_border
from oretel.ore import OreSpec
from oretel.properness import (
    NotProper,
    OrbitAnalysis,
    check_witness,
    compute_eta,
    compute_gamma,
    compute_height,
    integer_linear_decompose,
    is_y_proper,
    phi_bound,
    properness_report,
)

SHIFT = OreSpec.of("shift", "shift")


@pytest.mark.parametrize(
    "kinds,u,proper",
    [
        (("shift", "shift"), "(x+1)^2+y^2", False),
        (("derivation", "shift"), "x^2", True),
        (("derivation", "derivation"), "(x+1)^2+y^2", True),
        (("shift", "shift"), "(x+y+1)*(x-y+1)", True),
        (("shift", "shift"), "y", False),
        (("shift", "shift"), "2*x+y", False),
        (("shift", "shift"), "(2*x+y)*(2*x+y+1)", True),
        (("shift", "shift"), "x+2*y", True),
        (("shift", "shift"), "x^2+1", True),
    ],
)
def test_is_y_proper(kinds, u, proper):
    assert is_y_proper(u, OreSpec.of(*kinds))[0] is proper


@pytest.mark.parametrize("u", ["y", "2*x+y", "x+2*y", "(x+y+1)*(x-y+1)", "(2*x+y)*(2*x+y+1)"])
def test_verdict_matches_border_growth(u):
    # left borders of fac(u, r, x) for growing r, computed through the brute-force gff
    p = SHIFT.fieldspec.poly(u)
    degrees = []
    for r in (3, 4, 5):
        parts = oracles.gff_by_search(fac_poly(p, r, "x", SHIFT))
        degrees.append(sum(q.degree(1) for q in parts.values()))
    bounded = degrees[0] == degrees[1] == degrees[2]
    assert is_y_proper(u, SHIFT)[0] is bounded


def test_integer_linear_examples():
    P = SHIFT.fieldspec.poly
    found, rest = integer_linear_decompose(P("(x+3*y+1)*(x+3*y+2)"))
    assert [(a, b, str(c), m) for (a, b, c), m in found] == [(1, 3, "1", 1), (1, 3, "2", 1)]
    assert rest == 1
    found, rest = integer_linear_decompose(P("x^2+y^2"))
    assert found == [] and rest == P("x^2+y^2")
    found, rest = integer_linear_decompose(P("(2*x-y)^2*(x+5)"))
    assert [(a, b, str(c), m) for (a, b, c), m in found] == [(2, -1, "0", 2), (1, 0, "5", 1)]
    assert rest == 1


def test_eta_examples():
    assert compute_eta(builders.power_sum()) == 0
    for rho in (1, 2, 3):
        assert compute_eta(builders.gamma_power_sum(1, rho)) == 0
    for k in (0, 1, 2):
        assert compute_eta(builders.bessel(k)) == 0


def test_height_and_gamma_examples():
    assert compute_height(builders.power_sum()) == 1
    for k in (0, 1, 2):
        assert compute_height(builders.bessel(k)) == k + 2
        assert compute_gamma(builders.bessel(k)) == 2
    flat = builders.shift_rational("1", "1", "1", "0")
    assert compute_height(flat) == 0


def test_phi_bound():
    assert phi_bound(builders.power_sum(), 0) == 0
    assert phi_bound(builders.power_sum()) == 2
    assert phi_bound(builders.inverse_gamma(1, 1), 1) == 1
    with pytest.raises(ValueError):
        phi_bound(builders.inverse_gamma(1, 1), 2)


def test_non_proper_raises():
    system = builders.shift_rational("(x+2)^2+y^2", "(x+1)^2+y^2", "(x+1)^2+(y+1)^2", "(x+1)^2+y^2")
    report = properness_report(system)
    assert not report.proper and report.reason
    with pytest.raises(NotProper):
        compute_eta(system)


@pytest.mark.parametrize(
    "system",
    [
        builders.power_sum(),
        builders.bessel(2),
        builders.gamma_power_sum(2, 2),
        builders.inverse_gamma(2, 3),
        builders.shift_rational("(x+y+1)*(x-y+1)", "1", "x+y+1", "x-y"),
    ],
)
def test_witnesses_reassemble(system):
    analysis = OrbitAnalysis(system)
    for r in range(1, 6):
        w = analysis.witness(r)
        check_witness(system, w)
        assert w.eta <= compute_eta(system)


@pytest.mark.parametrize("a", [1, 2, 3])
@pytest.mark.parametrize("b", [1, 2, 3])
def test_integer_linear_split_into_y_rising_powers(a, b):
    # (p)(p+1)...(p+ar-1) regrouped by residue class mod b: with ar = s*b + t the
    # first t classes contribute s+1 factors, the others s
    R = SHIFT.fieldspec.ring
    x, y = R.gens[:2]
    p = a * x + b * y + 1
    for r in range(1, 7):
        direct = R.one
        for i in range(a * r):
            direct *= p + i
        s, t = divmod(a * r, b)
        grouped = R.one
        for j in range(b):
            grouped *= oracles.rising_product(p + j, s + 1 if j < t else s, 1)
        assert direct == grouped


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)])
def test_completed_factor_has_bounded_border(a, b):
    P = SHIFT.fieldspec.poly
    u = P("1")
    for j in range(a):
        u *= P(f"{a}*x+{b}*y+{j}")
    degrees = {left_border(fac_poly(u, r, "x", SHIFT), "y", SHIFT).degree(1) for r in range(b, b + 5)}
    assert len(degrees) == 1 and degrees.pop() <= b
    assert is_y_proper(u, SHIFT)[0]


def test_changed_basis_borders():
    P = SHIFT.fieldspec.poly
    u = P("(x+y+1)*(x-y+1)")
    for r in range(1, 6):
        assert associated(left_border(fac_poly(u, r, "x", SHIFT), "y", SHIFT), P(f"(x+y+1)*(x-y+{r})"))
