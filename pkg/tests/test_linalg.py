import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from oretel.arith import FieldSpec
from oretel.linalg import echelon_on_prefix, make_polynomial, nullspace, rref_fraction_free

F = FieldSpec(("a",))
K = F.field
R = lambda s: F.rat(s)


def test_identity_has_trivial_kernel():
    eye = [[R(int(i == j)) for j in range(3)] for i in range(3)]
    assert nullspace(eye, K) == []


def test_zero_matrix_kernel_is_everything():
    zero = [[R(0)] * 3 for _ in range(2)]
    assert len(nullspace(zero, K, 3)) == 3


def test_rank_one_example():
    basis = nullspace([[R("x"), R(1)], [R("x^2"), R("x")]], K)
    assert basis == [(R(1), R("-x"))]


def test_parameters_and_denominators():
    rows = [[R("a/(x+1)"), R("1"), R("-x")], [R("2*a"), R("2*x+2"), R("-2*x^2-2*x")]]
    basis = nullspace(rows, K)
    assert len(basis) == 2
    for w in basis:
        for row in rows:
            assert sum((c * v for c, v in zip(row, w)), K.zero) == 0


def test_y_entries_rejected():
    with pytest.raises(ValueError):
        nullspace([[R("y"), R(1)]], K)


def test_row_scaling_does_not_change_kernel():
    rows = [[R("x"), R("x+1"), R("1")], [R("x^2"), R("x^2+x"), R("x")]]
    scaled = [[c * R("(x-3)/5") for c in rows[0]], rows[1]]
    assert nullspace(rows, K) == nullspace(scaled, K)


def test_rref_pivots_equal_common_denominator():
    flint_rows = [[R("x"), R("1"), R("2")], [R("1"), R("x"), R("0")]]
    from oretel.linalg import _clear_row, _ctx, _to_flint

    ctx = _ctx(("x", "a"))
    A = [[_to_flint(c, ctx) for c in _clear_row(r, F.ring)] for r in flint_rows]
    out, pivots, den = rref_fraction_free(A, 3)
    assert pivots == [0, 1]
    for i, col in enumerate(pivots):
        assert out[i][col] == den


def test_echelon_on_prefix_orders_by_support():
    basis = [(R(1), R(1), R(0)), (R(1), R(0), R(1))]
    with_t, rest = echelon_on_prefix(basis, 2, K)
    assert [max(i for i in range(2) if v[i]) for v in with_t] == [0, 1]
    assert rest == []


def test_make_polynomial_clears_denominators():
    vec = (R("1/(2*x)"), R("3/4"))
    assert make_polynomial(vec, K) == (R(2), R("3*x"))


@st.composite
def matrices(draw):
    m, n = draw(st.integers(1, 4)), draw(st.integers(1, 5))
    entry = st.lists(st.integers(-3, 3), min_size=2, max_size=2).map(lambda c: R(f"{c[0]} + {c[1]}*x"))
    rows = [[draw(entry) for _ in range(n)] for _ in range(m)]
    if draw(st.booleans()) and m > 1:
        rows[-1] = [a + R("x") * b for a, b in zip(rows[0], rows[1 % m])]
    return rows, n


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(case):
    rows, n = case
    basis = nullspace(rows, K, n)
    assert len(basis) == n - oracles.rank_over_qx(rows, K)
    for w in basis:
        assert all(c.denom.is_ground for c in w)
