import random

import pytest

from oretel.ore import KINDS, OreOperator, OreSpec, right_division
from oretel.parsing import parse_operator


def spec(x_kind, y_kind="shift"):
    q = ("q",) if "q_" in x_kind + y_kind else ()
    return OreSpec.of(x_kind, y_kind, q)


def test_sigma_delta_examples():
    d = spec("derivation", "shift")
    F = d.fieldspec
    assert d.delta(F.rat("x^2"), "x") == F.rat("2*x")
    assert d.sigma(F.rat("y^2+1"), "y") == F.rat("y^2+2*y+2")
    fd = spec("shift", "forward_difference")
    assert fd.delta(F.rat("1/y"), "y") == F.rat("-1/(y*(y+1))")


def test_q_shift_scales_by_q():
    s = spec("shift", "q_shift")
    F = s.fieldspec
    assert s.sigma(F.rat("y^2 + y"), "y") == F.rat("q^2*y^2 + q*y")
    assert s.sigma(F.rat("1/y"), "y", -1) == F.rat("q/y")


@pytest.mark.parametrize(
    "kinds,product",
    [
        (("derivation", "shift"), "x*Dx + 1"),
        (("shift", "shift"), "(x+1)*Dx"),
    ],
)
def test_commutation_with_x(kinds, product):
    s = spec(*kinds)
    assert parse_operator("Dx", s) * parse_operator("x", s) == parse_operator(product, s)


def test_commutation_forward_difference():
    s = spec("shift", "forward_difference")
    assert parse_operator("Dy", s) * parse_operator("y", s) == parse_operator("(y+1)*Dy + 1", s)


@pytest.mark.parametrize(
    "kinds,op,f,expected",
    [
        (("derivation", "shift"), "Dx", "x^2", "2*x"),
        (("shift", "shift"), "Dy", "1/y", "1/(y+1)"),
        (("shift", "forward_difference"), "Dy + 1", "y^2", "(y+1)^2"),
    ],
)
def test_action_examples(kinds, op, f, expected):
    s = spec(*kinds)
    F = s.fieldspec
    assert parse_operator(op, s).apply(F.rat(f)) == F.rat(expected)


@pytest.mark.parametrize("x_kind", KINDS)
@pytest.mark.parametrize("y_kind", KINDS)
def test_degree_assumptions_every_pair(x_kind, y_kind):
    spec(x_kind, y_kind).check_degree_assumptions(random.Random(3), trials=10)


def test_q_difference_keeps_degree():
    s = spec("shift", "q_difference")
    assert not s.delta_lowers_degree("y")
    assert s.delta_lowers_degree("x")


def test_sigma_action_needs_zero_delta():
    with pytest.raises(ValueError):
        OreSpec(spec("shift").fieldspec, "derivation", "shift", x_action="sigma")


def test_q_kinds_need_parameter():
    with pytest.raises(ValueError, match="parameter q"):
        OreSpec.of("q_shift", "shift")


def test_right_division_recovers_left_factor():
    s = spec("shift", "forward_difference")
    b = parse_operator("(Dx - 1)*(Dx - 2)", s)
    a = parse_operator("(x^2+1)*Dx + 3", s) * b
    q, r = right_division(a, b)
    assert not r
    assert q == parse_operator("(x^2+1)*Dx + 3", s)


def test_right_division_remainder():
    s = spec("shift", "forward_difference")
    q, r = right_division(parse_operator("2*Dx^2 - 3*Dx + 1", s), parse_operator("Dx^2 - 3*Dx + 2", s))
    assert q == parse_operator("2", s)
    assert r == parse_operator("3*Dx - 3", s)


def test_right_division_rejects_dy():
    s = spec("shift")
    with pytest.raises(ValueError):
        right_division(parse_operator("Dy", s), parse_operator("Dx", s))


def test_printer_round_trip():
    s = spec("derivation", "forward_difference")
    op = parse_operator("(x+1)/y*Dx^2*Dy - Dy + 1/3", s)
    assert parse_operator(op.to_expr(), s) == op
    assert OreOperator.dx(s) * OreOperator.dy(s) == OreOperator.dy(s) * OreOperator.dx(s)
