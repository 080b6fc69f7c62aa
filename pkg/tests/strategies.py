"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from crgjms.exact import GaussianRational
from crgjms.heisenberg import HeisPoly, TensorPoly

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=9)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)


def exponents(n: int, max_exp: int = 3):
    return st.tuples(*[st.integers(0, max_exp)] * (2 * n + 1))


def heis_polys(n: int, max_terms: int = 4, max_exp: int = 3):
    return st.dictionaries(exponents(n, max_exp), gaussians, max_size=max_terms).map(lambda d: HeisPoly(n, d))


def tensor_polys(n: int, channel: str, max_terms: int = 3):
    keys = list(TensorPoly(n, channel).keys())
    return st.tuples(*[heis_polys(n, max_terms) for _ in keys]).map(lambda ps: TensorPoly(n, channel, dict(zip(keys, ps))))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda x: x != 0).map(Fraction)
