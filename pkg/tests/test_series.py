from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from crgjms.series import RhoSeries

r = sp.Symbol("r")
M = 8


def unit_series():
    coeffs = st.dictionaries(st.integers(1, M), st.fractions(min_value=-4, max_value=4, max_denominator=6), max_size=4)
    return coeffs.map(lambda d: RhoSeries(M, {0: Fraction(1), **d}))


def to_sympy(s: RhoSeries):
    return sum((sp.Rational(c.numerator, c.denominator) * r**j for j, c in s.smooth.items()), sp.Integer(0))


def sympy_series(expr):
    return sp.expand(sp.series(expr, r, 0, M + 1).removeO())


@settings(max_examples=30, deadline=None)
@given(unit_series())
def test_square_root_squares_back(s):
    root = s.sqrt()
    assert root.mul_scalar_series(root).truncate(M) == s


@settings(max_examples=30, deadline=None)
@given(unit_series())
def test_reciprocal_and_power_match_sympy(s):
    e = to_sympy(s)
    assert to_sympy(s.reciprocal()) == sympy_series(1 / e)
    assert to_sympy(s.power(3)) == sympy_series(e**3)
    assert to_sympy(s.power(Fraction(-2, 3))) == sympy_series(e ** sp.Rational(-2, 3))


@settings(max_examples=30, deadline=None)
@given(unit_series())
def test_log_derivative_matches_sympy(s):
    e = to_sympy(s)
    assert to_sympy(s.log_derivative()) == sympy_series(r * sp.diff(e, r) / e)


def test_rho_derivative_of_log_term():
    # rho d/drho (rho^2 log rho) = 2 rho^2 log rho + rho^2
    s = RhoSeries(4, log={2: Fraction(1)})
    assert s.rho_derivative() == RhoSeries(4, {2: Fraction(1)}, {2: Fraction(2)})


def test_shift_and_truncation():
    s = RhoSeries(5, {1: Fraction(2), 4: Fraction(3)})
    assert s.shift(2).max_order == 7
    assert s.shift(2).coeff(6) == 3
    with pytest.raises(IndexError):
        s.coeff(6)
    assert s.truncate(3) == RhoSeries(3, {1: Fraction(2)})


def test_non_unit_series_rejected():
    with pytest.raises(ValueError):
        RhoSeries(3, {0: Fraction(2)}).sqrt()
    with pytest.raises(ValueError):
        RhoSeries(3, {0: Fraction(1)}, {1: Fraction(1)}).reciprocal()


def test_json_round_trip():
    s = RhoSeries(6, {0: Fraction(1), 3: Fraction(-2, 7)}, {4: Fraction(5)})
    assert RhoSeries.from_json(s.to_json(), Fraction) == s
