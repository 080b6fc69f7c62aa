"""Truncated expansions ``sum_j rho^j (a_j + b_j log rho)``.

Coefficients live in any additive type that supports multiplication by a
Gaussian rational (Fractions, :class:`GaussianRational`, polynomials,
operator normal forms). Zero coefficients are not stored, so the type of
an absent coefficient never has to be guessed.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from fractions import Fraction

from .exact import GaussianRational

__all__ = ["RhoSeries", "add_opt", "scale_opt"]


def add_opt(x, y):
    """Add two possibly-absent coefficients (None means zero)."""
    if x is None:
        return y
    if y is None:
        return x
    s = x + y
    return s if s else None


def scale_opt(x, c):
    if x is None or not c:
        return None
    s = x * c
    return s if s else None


class RhoSeries:
    __slots__ = ("max_order", "smooth", "log")

    def __init__(self, max_order: int, smooth: Mapping[int, object] | None = None, log: Mapping[int, object] | None = None):
        self.max_order = max_order
        self.smooth = {j: c for j, c in sorted((smooth or {}).items()) if j <= max_order and c}
        self.log = {j: c for j, c in sorted((log or {}).items()) if j <= max_order and c}

    @classmethod
    def constant(cls, c, max_order: int) -> RhoSeries:
        return cls(max_order, {0: c})

    # access

    def coeff(self, j: int, default=None):
        self._in_range(j)
        return self.smooth.get(j, default)

    def log_coeff(self, j: int, default=None):
        self._in_range(j)
        return self.log.get(j, default)

    def _in_range(self, j: int) -> None:
        if j > self.max_order:
            raise IndexError(f"order {j} beyond truncation {self.max_order}")

    def orders(self) -> list[int]:
        return sorted(set(self.smooth) | set(self.log))

    def terms(self) -> Iterator[tuple[int, object, object]]:
        """Yield ``(j, a_j, b_j)`` with None for absent slots."""
        for j in self.orders():
            yield j, self.smooth.get(j), self.log.get(j)

    def valuation(self) -> int | None:
        """Lowest order with a nonzero coefficient, or None if zero."""
        orders = self.orders()
        return orders[0] if orders else None

    def has_log(self) -> bool:
        return bool(self.log)

    def __bool__(self) -> bool:
        return bool(self.smooth) or bool(self.log)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RhoSeries):
            return NotImplemented
        return self.max_order == other.max_order and self.smooth == other.smooth and self.log == other.log

    def __repr__(self) -> str:
        parts = []
        for j, a, b in self.terms():
            if a is not None:
                parts.append(f"rho^{j}*({a})")
            if b is not None:
                parts.append(f"rho^{j}*log(rho)*({b})")
        return f"RhoSeries(max={self.max_order}: {' + '.join(parts) or '0'})"

    # linear structure

    def _combine(self, other: RhoSeries, sign: int) -> RhoSeries:
        m = min(self.max_order, other.max_order)
        smooth = dict(self.smooth)
        log = dict(self.log)
        for src, dst in ((other.smooth, smooth), (other.log, log)):
            for j, c in src.items():
                dst[j] = add_opt(dst.get(j), c if sign > 0 else -c)
        return RhoSeries(m, {j: c for j, c in smooth.items() if c is not None}, {j: c for j, c in log.items() if c is not None})

    def __add__(self, other: RhoSeries) -> RhoSeries:
        return self._combine(other, 1)

    def __sub__(self, other: RhoSeries) -> RhoSeries:
        return self._combine(other, -1)

    def __neg__(self) -> RhoSeries:
        return self.map(lambda c: -c)

    def scale(self, c) -> RhoSeries:
        if not c:
            return RhoSeries(self.max_order)
        return self.map(lambda x: x * c)

    def map(self, fn: Callable) -> RhoSeries:
        """Apply a linear map to every coefficient."""
        return RhoSeries(
            self.max_order,
            {j: fn(c) for j, c in self.smooth.items()},
            {j: fn(c) for j, c in self.log.items()},
        )

    def truncate(self, max_order: int) -> RhoSeries:
        return RhoSeries(min(max_order, self.max_order), self.smooth, self.log)

    def shift(self, d: int) -> RhoSeries:
        """Multiply by ``rho^d``; known orders move up with the data."""
        return RhoSeries(
            self.max_order + d,
            {j + d: c for j, c in self.smooth.items()},
            {j + d: c for j, c in self.log.items()},
        )

    def rho_derivative(self) -> RhoSeries:
        """``rho d/drho``: rho^j (a + b log) -> rho^j (j a + b + j b log)."""
        smooth, log = {}, {}
        for j, a, b in self.terms():
            s = scale_opt(a, j) if a is not None else None
            s = add_opt(s, b)
            if s is not None:
                smooth[j] = s
            if b is not None and j:
                log[j] = b * j
        return RhoSeries(self.max_order, smooth, log)

    # scalar series (Fraction coefficients)

    def mul_scalar_series(self, other: RhoSeries) -> RhoSeries:
        """Product with a log-free series whose coefficients are scalars."""
        if other.log:
            raise ValueError("scalar factor must be log-free")
        low_self = self.valuation() or 0
        low_other = other.valuation() or 0
        m = min(self.max_order + low_other, other.max_order + low_self)
        smooth, log = {}, {}
        for i, s in other.smooth.items():
            for j, a, b in self.terms():
                k = i + j
                if k > m:
                    continue
                if a is not None:
                    smooth[k] = add_opt(smooth.get(k), a * s)
                if b is not None:
                    log[k] = add_opt(log.get(k), b * s)
        return RhoSeries(m, {k: c for k, c in smooth.items() if c is not None}, {k: c for k, c in log.items() if c is not None})

    def reciprocal(self) -> RhoSeries:
        """``1/s`` for a scalar series with unit constant term."""
        self._require_unit()
        m = self.max_order
        out = {0: Fraction(1)}
        for k in range(1, m + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                if i in self.smooth and (k - i) in out:
                    acc -= self.smooth[i] * out[k - i]
            if acc:
                out[k] = acc
        return RhoSeries(m, out)

    def power(self, exponent: Fraction | int) -> RhoSeries:
        """``s^e`` for a scalar series with unit constant term, by the
        binomial series ``sum_k binom(e, k) (s - 1)^k``."""
        self._require_unit()
        m = self.max_order
        e = Fraction(exponent)
        x = RhoSeries(m, {j: c for j, c in self.smooth.items() if j > 0})
        total = RhoSeries(m, {0: Fraction(1)})
        x_pow = RhoSeries(m, {0: Fraction(1)})
        binom = Fraction(1)
        for k in range(1, m + 1):
            x_pow = x_pow.mul_scalar_series(x).truncate(m)
            if not x_pow:
                break
            binom = binom * (e - k + 1) / k
            total = total + x_pow.scale(binom)
        return total.truncate(m)

    def sqrt(self) -> RhoSeries:
        return self.power(Fraction(1, 2))

    def log_derivative(self) -> RhoSeries:
        """``rho d/drho log s = rho s' / s`` for a scalar series."""
        return self.rho_derivative().mul_scalar_series(self.reciprocal()).truncate(self.max_order)

    def _require_unit(self) -> None:
        if self.log or self.smooth.get(0) != 1 or any(j < 0 for j in self.smooth):
            raise ValueError("series must be log-free with constant term 1")

    # serialization

    def to_json(self, coeff_json: Callable[[object], object] | None = None) -> dict:
        enc = coeff_json or _default_json
        return {
            "max_order": self.max_order,
            "terms": [
                {"j": j, **({"a": enc(a)} if a is not None else {}), **({"b": enc(b)} if b is not None else {})}
                for j, a, b in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, coeff_from_json: Callable[[object], object]) -> RhoSeries:
        smooth = {t["j"]: coeff_from_json(t["a"]) for t in obj["terms"] if "a" in t}
        log = {t["j"]: coeff_from_json(t["b"]) for t in obj["terms"] if "b" in t}
        return cls(obj["max_order"], smooth, log)


def _default_json(c):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, GaussianRational):
        return c.to_json()
    if hasattr(c, "to_json"):
        return c.to_json()
    raise TypeError(f"no JSON encoding for {type(c).__name__}")
