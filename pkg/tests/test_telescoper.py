import pytest

import builders
from oretel.ore import OreOperator, right_division
from oretel.parsing import parse_operator
from oretel.properness import NotProper
from oretel.system import DFiniteSystem
from oretel.telescoper import (
    TelescopeFailure,
    TelescopePair,
    build_z,
    certificate_as_operator,
    degree_bound_s,
    telescope,
    verify_pair,
)


@pytest.mark.parametrize(
    "deg_e,gamma,height,r,expected",
    [(0, 1, 1, 2, (1, False)), (3, 0, 0, 5, (3, False)), (0, 0, 2, 1, (0, True))],
)
def test_degree_bound_s(deg_e, gamma, height, r, expected):
    assert degree_bound_s(deg_e, gamma, height, r) == expected


def test_build_z_inverse_gamma():
    system = builders.inverse_gamma(1, 1)
    plan = build_z(system, 1)
    assert plan.z == system.spec.field.one
    assert plan.d == system.u


def test_build_z_differential_example():
    system = builders.power_sum()
    plan = build_z(system, 2)
    F = system.spec.fieldspec
    p = F.rat(builders.DIFF_P)
    assert plan.d == system.u**2
    # the certificate denominator divides a power of p
    assert (p**3 / plan.z).denom.is_ground


def _product(spec, n, rho, value):
    dx = OreOperator.dx(spec)
    power = OreOperator.scalar(spec, 1)
    for _ in range(rho):
        power = power * dx
    out = OreOperator.scalar(spec, 1)
    for k in range(1, n + 1):
        out = out * (power - value(k))
    return out


def _left_multiple(T, P):
    q, r = right_division(T, P)
    return not r and q.order_x == 0


@pytest.mark.parametrize("n,rho", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_negative_powers_give_product_telescoper(n, rho):
    system = builders.gamma_power_sum(n, rho, sign=-1)
    pair = telescope(system)
    assert pair.order == n * rho
    assert _left_multiple(pair.T, _product(system.spec, n, rho, lambda k: k))


@pytest.mark.parametrize("n,rho", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_positive_powers_give_reciprocal_roots(n, rho):
    system = builders.gamma_power_sum(n, rho)
    pair = telescope(system)
    F = system.spec.fieldspec
    assert pair.order == n * rho
    assert _left_multiple(pair.T, _product(system.spec, n, rho, lambda k: F.rat(1) / k))


def test_normalised_output():
    pair = telescope(builders.gamma_power_sum(2, 1))
    assert pair.T == parse_operator("2*Dx^2 - 3*Dx + 1", pair.T.spec)


def test_perturbed_pair_fails():
    system = builders.power_sum()
    pair = telescope(system, phi=0)
    assert verify_pair(system, pair)
    bumped = TelescopePair(pair.T + 1, pair.c)
    assert not verify_pair(system, bumped)


def test_zero_pair_rejected():
    system = builders.inverse_gamma(1, 1)
    zero = system.spec.field.zero
    assert not verify_pair(system, TelescopePair(OreOperator(system.spec), (zero,)))


def test_certificate_operator_uses_lifts():
    system = builders.bessel(0)
    pair = telescope(system, phi=0)
    c1, c2 = pair.c
    expected = OreOperator.scalar(system.spec, c1) + OreOperator.dx(system.spec).left_scale(c2)
    assert pair.C_operator == expected


def test_certificate_operator_scalar_and_missing():
    system = builders.inverse_gamma(1, 1)
    with pytest.raises(ValueError, match="certificate available as vector only"):
        certificate_as_operator(system, (system.spec.field.one,))
    lifted = DFiniteSystem(system.spec, system.u, system.U, system.v, system.V, system.e, [parse_operator("1", system.spec)])
    c = (system.spec.fieldspec.rat("x/(y+1)"),)
    assert certificate_as_operator(lifted, c) == OreOperator.scalar(system.spec, c[0])


def test_failure_carries_diagnostics():
    with pytest.raises(TelescopeFailure) as info:
        telescope(builders.bessel(1), phi=0, r_max=2)
    assert info.value.diagnostics["r_max"] == 2
    assert info.value.diagnostics["bound"] == 6


def test_non_proper_rejected():
    system = builders.shift_rational("(x+2)^2+y^2", "(x+1)^2+y^2", "(x+1)^2+(y+1)^2", "(x+1)^2+y^2")
    with pytest.raises(NotProper):
        telescope(system)


def test_direct_search_at_bound():
    system = builders.inverse_gamma(1, 2)
    pair = telescope(system, incremental=False)
    assert verify_pair(system, pair)
    assert pair.diagnostics["r"] == pair.diagnostics["bound"]


def test_clamped_degree():
    system = builders.inverse_gamma(1, 2)
    plan = build_z(system, 1)
    assert (plan.s, plan.s_clamped) == (0, True)
    with pytest.raises(TelescopeFailure):
        telescope(system, r_max=1)
    assert telescope(system).order == 2


def test_diagnostics_recorded():
    pair = telescope(builders.power_sum(), phi=0)
    d = pair.diagnostics
    assert (d["eta"], d["gamma"], d["height"], d["phi"], d["bound"], d["n"]) == (0, 2, 1, 0, 2, 2)
    assert d["unknowns"] >= d["nullity"] >= 1
