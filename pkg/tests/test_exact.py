from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from crgjms.exact import ArithmeticDomainError, GaussianRational, parse_fraction

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x.numerator) < 10**6)
gaussians = st.builds(GaussianRational, fractions, fractions)


def to_sympy(x: GaussianRational):
    return sp.Rational(x.re.numerator, x.re.denominator) + sp.I * sp.Rational(x.im.numerator, x.im.denominator)


@given(gaussians, gaussians)
def test_add_mul_match_sympy(a, b):
    assert to_sympy(a + b) == sp.expand(to_sympy(a) + to_sympy(b))
    assert to_sympy(a * b) == sp.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a - b) == sp.expand(to_sympy(a) - to_sympy(b))


@given(gaussians, gaussians)
def test_division_matches_sympy(a, b):
    if not b:
        with pytest.raises(ArithmeticDomainError):
            a / b
        return
    assert to_sympy(a / b) == sp.nsimplify(sp.expand(sp.radsimp(to_sympy(a) / to_sympy(b))))


@given(gaussians, gaussians, gaussians)
def test_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    if a:
        assert a * a.inverse() == GaussianRational(1)


@given(gaussians)
def test_render_parse_and_json_round_trip(a):
    assert GaussianRational.parse(a.render()) == a
    assert GaussianRational.from_json(a.to_json()) == a


@given(gaussians)
def test_conjugate_and_norm(a):
    assert a * a.conjugate() == GaussianRational(a.norm())
    assert a.conjugate().conjugate() == a


def test_worked_division():
    assert GaussianRational(Fraction(2, 3), Fraction(1, 3)) / GaussianRational(Fraction(1, 3)) == GaussianRational(2, 1)


def test_division_by_zero_raises_domain_error():
    with pytest.raises(ArithmeticDomainError):
        GaussianRational(1) / GaussianRational(0)
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


def test_normal_form_is_canonical():
    assert GaussianRational(Fraction(2, 4), Fraction(-6, 8)) == GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert hash(GaussianRational(Fraction(2, 4))) == hash(GaussianRational(Fraction(1, 2)))


def test_parse_fraction():
    assert parse_fraction("-3/7") == Fraction(-3, 7)
    assert parse_fraction("5") == 5
    with pytest.raises(ArithmeticDomainError):
        parse_fraction("1/0")
    with pytest.raises(ValueError):
        parse_fraction("abc")


def test_large_coefficients_stay_exact():
    x = GaussianRational(Fraction(10**40 + 1, 3), Fraction(-(10**39), 7))
    assert (x * x) / x == x
