"""Exact Gaussian-rational scalars.

Rationals are plain :class:`fractions.Fraction`. A :class:`GaussianRational`
stores ``(a + b i) / d`` with integers ``a``, ``b`` and ``d > 0`` reduced so
that ``gcd(a, b, d) == 1``; the real and imaginary parts are exposed as
Fractions.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = [
    "GaussianRational",
    "ArithmeticDomainError",
    "I",
    "ONE",
    "ZERO",
    "as_gaussian",
    "fraction_json",
    "fraction_from_json",
    "gr_arith",
    "parse_fraction",
]


class ArithmeticDomainError(ZeroDivisionError):
    """Raised for division by an exact zero."""


Scalar = Union["GaussianRational", Fraction, int]


def _reduced(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d < 0:
        a, b, d = -a, -b, -d
    if a == 0 and b == 0:
        return 0, 0, 1
    g = gcd(gcd(a, b), d)
    if g != 1:
        a, b, d = a // g, b // g, d // g
    return a, b, d


class GaussianRational:
    """An exact complex number with rational real and imaginary parts."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re: Rational | int | str = 0, im: Rational | int | str = 0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._a, self._b, self._d = _reduced(a, b, d)
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = _reduced(a, b, d)
        obj._hash = None
        return obj

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """``|z|^2`` as a nonnegative Fraction."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.re) if self._b == 0 else hash((self._a, self._b, self._d))
        return self._hash

    def _key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __lt__(self, other: GaussianRational) -> bool:
        return self._key() < as_gaussian(other)._key()

    def __le__(self, other: GaussianRational) -> bool:
        return self._key() <= as_gaussian(other)._key()

    def __gt__(self, other: GaussianRational) -> bool:
        return self._key() > as_gaussian(other)._key()

    def __ge__(self, other: GaussianRational) -> bool:
        return self._key() >= as_gaussian(other)._key()

    def __neg__(self) -> GaussianRational:
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> GaussianRational:
        return self

    def __add__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return GaussianRational._raw(self._a + other._a, self._b + other._b, d1)
        return GaussianRational._raw(
            self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2
        )

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        if not self:
            raise ArithmeticDomainError("division by zero Gaussian rational")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        nrm = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, nrm)

    def __truediv__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> GaussianRational:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> GaussianRational:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self) -> str:
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        """Canonical text: ``p/q`` when real, ``(p/q)+(r/s)i`` otherwise."""
        if self._b == 0:
            return str(self.re)
        return f"({self.re})+({self.im})i"

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        """Inverse of :meth:`render`."""
        text = text.strip()
        m = _COMPLEX_RE.fullmatch(text)
        if m:
            return cls(parse_fraction(m.group(1)), parse_fraction(m.group(2)))
        return cls(parse_fraction(text), 0)

    def to_json(self) -> dict:
        re_, im_ = self.re, self.im
        return {
            "re": [str(re_.numerator), str(re_.denominator)],
            "im": [str(im_.numerator), str(im_.denominator)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> GaussianRational:
        return cls(fraction_from_json(obj["re"]), fraction_from_json(obj["im"]))


_RATIONAL = r"\s*[+-]?\d+(?:\s*/\s*\d+)?\s*"
_COMPLEX_RE = re.compile(rf"\(({_RATIONAL})\)\s*\+\s*\(({_RATIONAL})\)\s*i")
_FRACTION_RE = re.compile(r"([+-]?\d+)(?:/(\d+))?")


def parse_fraction(text: str) -> Fraction:
    m = _FRACTION_RE.fullmatch(text.replace(" ", ""))
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ArithmeticDomainError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def fraction_json(x: Fraction) -> list[str]:
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def fraction_from_json(pair) -> Fraction:
    num, den = pair
    if int(den) <= 0:
        raise ValueError(f"denominator must be positive: {pair!r}")
    return Fraction(int(num), int(den))


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    return None


def as_gaussian(x: Scalar) -> GaussianRational:
    g = _coerce(x)
    if g is None:
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")
    return g


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def gr_arith(a: Scalar, b: Scalar, op: str) -> GaussianRational:
    """Apply ``op`` in {add, sub, mul, div}; division by zero raises
    :class:`ArithmeticDomainError`."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(as_gaussian(a), as_gaussian(b))
