from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import sympy_oracle as so
from crgjms.exact import GaussianRational
from strategies import heis_polys, tensor_polys
from crgjms.heisenberg import (
    ExpressionSyntaxError,
    HeisPoly,
    TensorPoly,
    check_frame_relations,
    parse_expression,
    reeb,
    sublaplacian,
    z_field,
    zbar_field,
)


@pytest.mark.parametrize("n", [1, 2, 3])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_render_parse_round_trip(n, data):
    p = data.draw(heis_polys(n))
    assert parse_expression(p.render(), n) == p
    assert HeisPoly.from_json(p.to_json()) == p


@pytest.mark.parametrize("n", [1, 2])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_frame_fields_match_direct_differentiation(n, data):
    p = data.draw(heis_polys(n))
    e = so.heis_to_sympy(p)
    for a in range(1, n + 1):
        assert so.heis_to_sympy(z_field(a, p)) == so.field_z(e, n, a)
        assert so.heis_to_sympy(zbar_field(a, p)) == so.field_zb(e, n, a)
    assert so.heis_to_sympy(reeb(p)) == so.field_t(e, n)
    assert so.heis_to_sympy(sublaplacian(p)) == so.sublaplacian(e, n)


@settings(max_examples=20, deadline=None)
@given(a=heis_polys(2), b=heis_polys(2))
def test_ring_operations_match_sympy(a, b):
    assert so.heis_to_sympy(a * b) == sp.expand(so.heis_to_sympy(a) * so.heis_to_sympy(b))
    assert so.heis_to_sympy(a - b) == sp.expand(so.heis_to_sympy(a) - so.heis_to_sympy(b))


def test_sublaplacian_of_z_zbar():
    assert sublaplacian(parse_expression("z1*zb1", 1)) == HeisPoly.constant(1, -2)


def test_contraction_identity_on_scalar():
    # Z^a Z_a p = -1/2 (Delta_b - i n T) p for p = z1 t, n = 2
    n = 2
    p = parse_expression("z1*t", n)
    lhs = sum((zbar_field(a, z_field(a, p)) for a in range(1, n + 1)), HeisPoly.zero(n))
    rhs = (sublaplacian(p) - reeb(p).scale(GaussianRational(0, n))).scale(Fraction(-1, 2))
    assert lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3])
def test_frame_relations(n):
    rep = check_frame_relations(n)
    assert rep.passed, rep.failures()


def test_bracket_z1_zb1_is_minus_i_t():
    n = 2
    p = parse_expression("t^2*z1 + zb2*t", n)
    comm = z_field(1, zbar_field(1, p)) - zbar_field(1, z_field(1, p))
    assert comm == reeb(p).scale(GaussianRational(0, -1))


@pytest.mark.parametrize(
    "text, offset",
    [("z1 + ", 5), ("z3", 0), ("2*(t", 4), ("z1 $ 2", 3), ("1/0", 3), ("zb", 2), ("z1^", 3)],
)
def test_syntax_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text, 2)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


def test_parse_precedence_and_constants():
    n = 1
    assert parse_expression("2*z1^2 - 1/3*t + i", n) == (
        HeisPoly.z(n, 1) ** 2 * 2 - HeisPoly.t(n).scale(Fraction(1, 3)) + HeisPoly.constant(n, GaussianRational(0, 1))
    )
    assert parse_expression("-(z1 + zb1)", n) == -(HeisPoly.z(n, 1) + HeisPoly.zb(n, 1))


@settings(max_examples=15, deadline=None)
@given(psi=tensor_polys(2, "sym2"))
def test_divergence_matches_direct_contraction(psi):
    n = 2
    d = psi.div()
    for a in range(1, n + 1):
        direct = sum((so.field_zb(so.heis_to_sympy(psi[a, g]), n, g) for g in range(1, n + 1)), sp.Integer(0))
        assert so.heis_to_sympy(d[a]) == sp.expand(direct)


@settings(max_examples=15, deadline=None)
@given(v=tensor_polys(2, "vector"))
def test_symmetrized_insertion_matches_direct(v):
    n = 2
    s = v.zsym()
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            direct = (so.field_z(so.heis_to_sympy(v[b]), n, a) + so.field_z(so.heis_to_sympy(v[a]), n, b)) / 2
            assert so.heis_to_sympy(s[a, b]) == sp.expand(direct)


def test_tensor_rejects_asymmetric_and_bad_indices():
    n = 2
    with pytest.raises(ValueError):
        TensorPoly(n, "sym2", {(1, 2): HeisPoly.t(n), (2, 1): HeisPoly.z(n, 1)})
    with pytest.raises(IndexError):
        TensorPoly(n, "vector", {(3,): HeisPoly.t(n)})
