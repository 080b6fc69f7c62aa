import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp

import sympy_oracle as so
from crgjms.exact import GaussianRational
from crgjms.frame import (
    FrameTensor,
    anti_hermitian_tensor,
    check_christoffel,
    christoffel_from_koszul,
    christoffel_table,
    conj_index,
    covariant_derivative,
    curvature,
    curvature_constants,
    dim,
    divergence,
    einstein_check,
    frame_brackets,
    index_name,
    inverse_metric,
    key_name,
    lichnerowicz_apply,
    metric,
    metric_tensor,
    parse_index,
    ricci,
    scalar_curvature,
)
from crgjms.heisenberg import HeisPoly, random_tensor_poly
from crgjms.series import RhoSeries

ZERO = GaussianRational(0)


def sympy_frame(n):
    """The rescaled frame as operators on functions of (rho, z, zb, t)."""
    r = sp.Symbol("r", positive=True)
    z, zb, t = so.heis_symbols(n)

    def tau(f, sign):
        return sp.expand(r * sp.diff(f, r) / 2 + sign * sp.I * r**2 * 2 * sp.diff(f, t))

    ops = [lambda f: tau(f, 1)]
    ops += [lambda f, a=a: sp.expand(r * so.field_z(f, n, a)) for a in range(1, n + 1)]
    ops += [lambda f: tau(f, -1)]
    ops += [lambda f, a=a: sp.expand(r * so.field_zb(f, n, a)) for a in range(1, n + 1)]
    return r, ops


@pytest.mark.parametrize("n", [1, 2])
def test_brackets_match_direct_commutators(n):
    r, ops = sympy_frame(n)
    z, zb, t = so.heis_symbols(n)
    f = sp.Function("f")(r, *z, *zb, t)
    br = frame_brackets(n)
    for p, q in itertools.product(range(dim(n)), repeat=2):
        direct = sp.expand(ops[p](ops[q](f)) - ops[q](ops[p](f)))
        claimed = sum((so.gaussian_to_sympy(c) * ops[s](f) for s, c in br.get((p, q), {}).items()), sp.Integer(0))
        assert sp.expand(direct - claimed) == 0, (index_name(p, n), index_name(q, n))


def test_bracket_examples():
    n = 2
    half = GaussianRational(Fraction(1, 2))
    assert frame_brackets(n)[(0, 1)] == {1: half}
    assert frame_brackets(n)[(1, n + 2)] == {0: -half, n + 1: half}
    assert (1, 2) not in frame_brackets(n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_connection_is_torsion_free_and_metric(n):
    G = christoffel_from_koszul(n)
    g = metric(n)
    br = frame_brackets(n)
    N = dim(n)
    for r_, p, q in itertools.product(range(N), repeat=3):
        torsion = G.get((r_, p, q), ZERO) - G.get((r_, q, p), ZERO)
        assert torsion == br.get((p, q), {}).get(r_, ZERO)
    # Z_P g(Z_Q, Z_R) = 0 since the metric is constant
    for p, q, r_ in itertools.product(range(N), repeat=3):
        lhs = sum((G.get((s, p, q), ZERO) * g.get((s, r_), ZERO) + G.get((s, p, r_), ZERO) * g.get((q, s), ZERO) for s in range(N)), ZERO)
        assert lhs == ZERO


@pytest.mark.parametrize("n", [1, 2, 3])
def test_christoffel_table(n):
    rep = check_christoffel(n)
    assert rep.passed, rep.failures()
    assert christoffel_from_koszul(n) == christoffel_table(n)


def test_christoffel_examples():
    n = 2
    G = christoffel_from_koszul(n)
    t = 0
    assert G[(t, t, t)] == GaussianRational(-1)
    assert G[(t, n + 2, 1)] == GaussianRational(Fraction(1, 2))
    assert all((g, a, b) not in G for g, a, b in itertools.product(range(1, n + 1), repeat=3))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_einstein_and_curvature(n):
    rep = einstein_check(n)
    assert rep.passed, rep.failures()
    R = curvature_constants(n)
    assert R[(0, n + 1, 0, n + 1)] == GaussianRational(-4)
    assert R[(1, n + 2, 1, n + 2)] == GaussianRational(-1)
    assert scalar_curvature(n) == GaussianRational(-(n + 1) * (n + 2))
    Ric = ricci(n, 2)
    assert not (Ric + metric_tensor(n, 2).scale(GaussianRational(Fraction(n + 2, 2))))


def test_curvature_has_only_kahler_type_components():
    n = 2
    R = curvature(n, 0)
    for key in R.comps:
        barred = [i > n for i in key]
        assert barred[0] != barred[1] and barred[2] != barred[3]


def test_index_names_round_trip():
    n = 3
    for i in range(dim(n)):
        assert parse_index(index_name(i, n), n) == i
        assert conj_index(conj_index(i, n), n) == i
    assert key_name((0, 1, n + 1), n) == "t,1,bt"
    assert inverse_metric(n)[(0, n + 1)] == GaussianRational(Fraction(1, 2))


def test_lichnerowicz_preserves_metric():
    # Delta_L g = 0 on an Einstein background, so the shifted operator gives (n+2) g
    for n in (1, 2):
        g = metric_tensor(n, 3)
        assert lichnerowicz_apply(g) == g.scale(GaussianRational(n + 2))


@pytest.mark.parametrize("j", range(6))
def test_divergence_of_tt_component(j):
    n = 2
    M = 8
    s = FrameTensor(n, 2, M, {(0, 0): RhoSeries(M, {j: HeisPoly.constant(n)})})
    d = divergence(s)
    assert set(d.comps) == {(0,)}
    assert d[(0,)] == RhoSeries(M, {j: HeisPoly.constant(n, Fraction(-(j - 2 * n - 4), 4))})


def test_divergence_of_constant_ab_component():
    n, M = 2, 6
    psi = random_tensor_poly(n, "sym2", random.Random(5), max_weight=4, terms=3)
    d = divergence(anti_hermitian_tensor(n, M, ab=RhoSeries(M, {0: psi})))
    for a in range(1, n + 1):
        assert d[(a,)] == RhoSeries(M, {1: -psi.div()[a]})


def test_radial_derivative_of_constant_ab_component():
    n, M = 2, 4
    psi = random_tensor_poly(n, "sym2", random.Random(2), max_weight=4, terms=3)
    nab = covariant_derivative(anti_hermitian_tensor(n, M, ab=RhoSeries(M, {0: psi})), [0])
    for a, b in itertools.product(range(1, n + 1), repeat=2):
        assert nab[(0, a, b)].coeff(0) == psi[a, b]


def test_nabla_of_one_form_along_horizontal():
    # mu_t = 1, everything else 0: nabla_b mu_t has no rho^0 term
    n, M = 2, 3
    mu = FrameTensor(n, 1, M, {(0,): RhoSeries(M, {0: HeisPoly.constant(n)})})
    nab = covariant_derivative(mu, [1])
    assert nab[(1, 0)].coeff(0) is None


def test_frame_tensor_json_keys():
    n = 1
    data = curvature(n, 0).to_json()
    assert "t,bt,t,bt" in data["components"]
    assert data["rank"] == 4
