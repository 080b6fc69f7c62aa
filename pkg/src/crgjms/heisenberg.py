"""Polynomial functions on the Heisenberg group and its standard CR frame.

Coordinates are ``z^1..z^n``, their conjugates ``zb^1..zb^n`` (treated as
independent variables) and ``t``. The contact form is
``theta = (dt + i sum(z dzb - zb dz)) / 2``, so

    T   = 2 d/dt
    Z_a = d/dz^a + i zb^a d/dt
    Zb_a = d/dzb^a - i z^a d/dt

with ``[Z_a, Zb_b] = -i delta_ab T`` and Levi form equal to the identity.
Upper indices are lowered with the identity, so ``Z^a`` is ``Zb_a``.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Mapping
from fractions import Fraction

from .exact import I, ONE, ZERO, GaussianRational, as_gaussian
from .report import Report

__all__ = [
    "ExpressionSyntaxError",
    "HeisPoly",
    "TensorPoly",
    "apply_field",
    "check_frame_relations",
    "parse_expression",
    "random_heis_poly",
    "random_tensor_poly",
    "reeb",
    "sublaplacian",
    "z_field",
    "zbar_field",
]

Exps = tuple[int, ...]


def _zero_exps(n: int) -> Exps:
    return (0,) * (2 * n + 1)


class HeisPoly:
    """Sparse polynomial in ``z``, ``zb`` and ``t`` with Gaussian-rational
    coefficients. Zero coefficients are never stored."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exps, GaussianRational] | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        clean: dict[Exps, GaussianRational] = {}
        if terms:
            width = 2 * n + 1
            for e, c in terms.items():
                if len(e) != width:
                    raise ValueError(f"exponent {e} has wrong length for n={n}")
                c = as_gaussian(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _trusted(cls, n: int, terms: dict[Exps, GaussianRational]) -> HeisPoly:
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, n: int, c=1) -> HeisPoly:
        return cls(n, {_zero_exps(n): as_gaussian(c)})

    @classmethod
    def zero(cls, n: int) -> HeisPoly:
        return cls._trusted(n, {})

    @classmethod
    def z(cls, n: int, alpha: int) -> HeisPoly:
        return cls._var(n, _check_index(alpha, n) - 1)

    @classmethod
    def zb(cls, n: int, alpha: int) -> HeisPoly:
        return cls._var(n, n + _check_index(alpha, n) - 1)

    @classmethod
    def t(cls, n: int) -> HeisPoly:
        return cls._var(n, 2 * n)

    @classmethod
    def _var(cls, n: int, slot: int) -> HeisPoly:
        e = [0] * (2 * n + 1)
        e[slot] = 1
        return cls._trusted(n, {tuple(e): ONE})

    # -- arithmetic -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, HeisPoly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == HeisPoly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def _same_n(self, other: HeisPoly) -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other) -> HeisPoly:
        if not isinstance(other, HeisPoly):
            if isinstance(other, (int, Fraction, GaussianRational)):
                other = HeisPoly.constant(self.n, other)
            else:
                return NotImplemented
        self._same_n(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return HeisPoly._trusted(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> HeisPoly:
        return HeisPoly._trusted(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> HeisPoly:
        return self + (-other)

    def __rsub__(self, other) -> HeisPoly:
        return (-self) + other

    def scale(self, c) -> HeisPoly:
        c = as_gaussian(c)
        if not c:
            return HeisPoly.zero(self.n)
        return HeisPoly._trusted(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> HeisPoly:
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        if not isinstance(other, HeisPoly):
            return NotImplemented
        self._same_n(other)
        out: dict[Exps, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                s = out.get(e)
                out[e] = v if s is None else s + v
        return HeisPoly._trusted(self.n, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> HeisPoly:
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> HeisPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = HeisPoly.constant(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> HeisPoly:
        n = self.n
        out = {}
        for e, c in self.terms.items():
            out[e[n : 2 * n] + e[:n] + e[2 * n :]] = c.conjugate()
        return HeisPoly._trusted(n, out)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def constant_term(self) -> GaussianRational:
        return self.terms.get(_zero_exps(self.n), ZERO)

    def weight(self, e: Exps) -> int:
        """Heisenberg weight of a monomial: t counts twice."""
        n = self.n
        return sum(e[: 2 * n]) + 2 * e[2 * n]

    def degree(self) -> int:
        return max((self.weight(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exps, GaussianRational]]:
        """Terms in descending graded-lex order (t weighted 2)."""
        return sorted(self.terms.items(), key=lambda kv: (self.weight(kv[0]), kv[0]), reverse=True)

    # -- frame actions ----------------------------------------------------

    def reeb(self) -> HeisPoly:
        return reeb(self)

    def sublaplacian(self) -> HeisPoly:
        return sublaplacian(self)

    # -- rendering --------------------------------------------------------

    def _monomial_text(self, e: Exps) -> list[str]:
        n = self.n
        parts = []
        for a in range(n):
            if e[a]:
                parts.append(f"z{a + 1}" + (f"^{e[a]}" if e[a] > 1 else ""))
        for a in range(n):
            if e[n + a]:
                parts.append(f"zb{a + 1}" + (f"^{e[n + a]}" if e[n + a] > 1 else ""))
        if e[2 * n]:
            parts.append("t" + (f"^{e[2 * n]}" if e[2 * n] > 1 else ""))
        return parts

    def render(self) -> str:
        """Text form accepted by :func:`parse_expression`."""
        if not self.terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = self._monomial_text(e)
            sign = "+"
            if c.is_real():
                r = c.re
                if r < 0:
                    sign, r = "-", -r
                coeff = None if (r == 1 and mono) else str(r)
            else:
                coeff = f"(({c.re})+({c.im})*i)"
            factors = ([coeff] if coeff is not None else []) + mono
            body = "*".join(factors)
            if idx == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"HeisPoly(n={self.n}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"exp": list(e), "coeff": c.to_json()} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> HeisPoly:
        return cls(
            int(obj["n"]),
            {tuple(t["exp"]): GaussianRational.from_json(t["coeff"]) for t in obj["terms"]},
        )


def _check_index(alpha: int, n: int) -> int:
    if not 1 <= alpha <= n:
        raise IndexError(f"index {alpha} out of range 1..{n}")
    return alpha


# -- vector field actions -------------------------------------------------


def _accumulate(out: dict, e: Exps, v: GaussianRational) -> None:
    s = out.get(e)
    out[e] = v if s is None else s + v


def reeb(p: HeisPoly) -> HeisPoly:
    """T = 2 d/dt."""
    ti = 2 * p.n
    out = {}
    for e, c in p.terms.items():
        k = e[ti]
        if k:
            out[e[:ti] + (k - 1,)] = c * (2 * k)
    return HeisPoly._trusted(p.n, out)


def _horizontal(p: HeisPoly, alpha: int, barred: bool) -> HeisPoly:
    n = p.n
    _check_index(alpha, n)
    a = alpha - 1
    diff_slot = n + a if barred else a
    mult_slot = a if barred else n + a
    phase = -I if barred else I
    ti = 2 * n
    out: dict[Exps, GaussianRational] = {}
    for e, c in p.terms.items():
        k = e[diff_slot]
        if k:
            f = list(e)
            f[diff_slot] -= 1
            _accumulate(out, tuple(f), c * k)
        m = e[ti]
        if m:
            f = list(e)
            f[ti] -= 1
            f[mult_slot] += 1
            _accumulate(out, tuple(f), c * phase * m)
    return HeisPoly._trusted(n, {e: c for e, c in out.items() if c})


def z_field(alpha: int, p: HeisPoly) -> HeisPoly:
    """Z_alpha = d/dz^alpha + i zb^alpha d/dt."""
    return _horizontal(p, alpha, barred=False)


def zbar_field(alpha: int, p: HeisPoly) -> HeisPoly:
    """Zb_alpha = d/dzb^alpha - i z^alpha d/dt; equal to Z^alpha."""
    return _horizontal(p, alpha, barred=True)


def apply_field(field: str, p: HeisPoly) -> HeisPoly:
    """Apply a field named ``"T"``, ``"Z<a>"`` or ``"Zb<a>"`` (e.g. ``"Zb2"``)."""
    if field == "T":
        return reeb(p)
    if field.startswith("Zb"):
        return zbar_field(int(field[2:]), p)
    if field.startswith("Z"):
        return z_field(int(field[1:]), p)
    raise ValueError(f"unknown field {field!r}")


def sublaplacian(p: HeisPoly) -> HeisPoly:
    """Delta_b = -sum_a (Z_a Zb_a + Zb_a Z_a)."""
    total = HeisPoly.zero(p.n)
    for a in range(1, p.n + 1):
        total = total + z_field(a, zbar_field(a, p)) + zbar_field(a, z_field(a, p))
    return -total


# -- expression parser ----------------------------------------------------


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ExpressionSyntaxError:
        pos = self.pos if pos is None else pos
        return ExpressionSyntaxError(message, len(self.text[:pos].encode()))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected unsigned integer")
        return int(self.text[start : self.pos])

    def parse(self) -> HeisPoly:
        result = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return result

    def expr(self) -> HeisPoly:
        sign = 1
        if self.peek() and self.peek() in "+-":
            if not self._signed_number_ahead():
                sign = -1 if self.text[self.pos] == "-" else 1
                self.pos += 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def _signed_number_ahead(self) -> bool:
        j = self.pos + 1
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return j < len(self.text) and self.text[j].isdigit()

    def term(self) -> HeisPoly:
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> HeisPoly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.uint()
        return base

    def atom(self) -> HeisPoly:
        ch = self.peek()
        start = self.pos
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "z":
            self.pos += 1
            barred = self.text.startswith("b", self.pos)
            if barred:
                self.pos += 1
            if not (self.pos < len(self.text) and self.text[self.pos].isdigit()):
                raise self.error("expected variable index")
            idx = self.uint()
            if not 1 <= idx <= self.n:
                raise self.error(f"variable index {idx} out of range 1..{self.n}", start)
            return HeisPoly.zb(self.n, idx) if barred else HeisPoly.z(self.n, idx)
        if ch == "t":
            self.pos += 1
            return HeisPoly.t(self.n)
        if ch == "i":
            self.pos += 1
            return HeisPoly.constant(self.n, I)
        if ch.isdigit() or ch in "+-":
            sign = 1
            if ch in "+-":
                sign = -1 if ch == "-" else 1
                self.pos += 1
                if not self.text[self.pos : self.pos + 1].isdigit():
                    raise self.error("expected digits after sign")
            num = self.uint()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                den = self.uint()
                if den == 0:
                    raise self.error("zero denominator")
            return HeisPoly.constant(self.n, Fraction(sign * num, den))
        raise self.error(f"unexpected {ch!r}")


def parse_expression(text: str, n: int) -> HeisPoly:
    """Parse a polynomial in ``z1..zn``, ``zb1..zbn``, ``t`` and ``i``.

    Raises :class:`ExpressionSyntaxError` carrying a byte offset on malformed
    input, including out-of-range variable indices.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return _Parser(text, n).parse()


# -- tensors --------------------------------------------------------------

CHANNELS = ("scalar", "vector", "sym2")


class TensorPoly:
    """Scalar, one-index or symmetric two-index holomorphic tensor with
    polynomial components. Symmetric components are stored once under the
    sorted index pair."""

    __slots__ = ("n", "channel", "comps")

    def __init__(self, n: int, channel: str, comps: Mapping[tuple[int, ...], HeisPoly] | None = None):
        if channel not in CHANNELS:
            raise ValueError(f"unknown channel {channel!r}")
        self.n = n
        self.channel = channel
        self.comps: dict[tuple[int, ...], HeisPoly] = {}
        for key in self.keys():
            self.comps[key] = HeisPoly.zero(n)
        for key, p in (comps or {}).items():
            key = tuple(key)
            if p.n != n:
                raise ValueError("component dimension mismatch")
            if channel == "sym2":
                if key[0] > key[1] and (key[1], key[0]) in (comps or {}):
                    if comps[(key[1], key[0])] != p:
                        raise ValueError(f"asymmetric components at {key}")
                key = tuple(sorted(key))
            if key not in self.comps:
                raise IndexError(f"index {key} invalid for {channel} channel with n={n}")
            self.comps[key] = p

    def keys(self) -> Iterator[tuple[int, ...]]:
        rng = range(1, self.n + 1)
        if self.channel == "scalar":
            yield ()
        elif self.channel == "vector":
            for a in rng:
                yield (a,)
        else:
            for a in rng:
                for b in range(a, self.n + 1):
                    yield (a, b)

    def __getitem__(self, key) -> HeisPoly:
        if not isinstance(key, tuple):
            key = (key,)
        if self.channel == "sym2":
            key = tuple(sorted(key))
        return self.comps[key]

    def map(self, fn) -> TensorPoly:
        return TensorPoly(self.n, self.channel, {k: fn(v) for k, v in self.comps.items()})

    def _check(self, other: TensorPoly) -> None:
        if self.n != other.n or self.channel != other.channel:
            raise ValueError("tensor channel/dimension mismatch")

    def __add__(self, other: TensorPoly) -> TensorPoly:
        self._check(other)
        return TensorPoly(self.n, self.channel, {k: v + other.comps[k] for k, v in self.comps.items()})

    def __sub__(self, other: TensorPoly) -> TensorPoly:
        self._check(other)
        return TensorPoly(self.n, self.channel, {k: v - other.comps[k] for k, v in self.comps.items()})

    def __neg__(self) -> TensorPoly:
        return self.map(lambda p: -p)

    def scale(self, c) -> TensorPoly:
        return self.map(lambda p: p.scale(c))

    def __mul__(self, c) -> TensorPoly:
        if isinstance(c, (int, Fraction, GaussianRational)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.n == other.n and self.channel == other.channel and self.comps == other.comps

    def __bool__(self) -> bool:
        return any(self.comps.values())

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v.render()}" for k, v in self.comps.items() if v)
        return f"TensorPoly(n={self.n}, {self.channel}, {{{body}}})"

    # concrete contractions and insertions

    def div(self) -> TensorPoly:
        """Contract the last index with Z^g: (Z.psi)_a = Z^g psi_ag."""
        n = self.n
        if self.channel == "scalar":
            raise ValueError("no free index to contract on a scalar")
        g_range = range(1, n + 1)
        if self.channel == "vector":
            total = HeisPoly.zero(n)
            for g in g_range:
                total = total + zbar_field(g, self.comps[(g,)])
            return TensorPoly(n, "scalar", {(): total})
        out = {}
        for a in g_range:
            total = HeisPoly.zero(n)
            for g in g_range:
                total = total + zbar_field(g, self[a, g])
            out[(a,)] = total
        return TensorPoly(n, "vector", out)

    def zsym(self) -> TensorPoly:
        """Symmetrized insertion of Z: scalar f -> Z_a f; vector v -> Z_(a v_b)."""
        n = self.n
        if self.channel == "scalar":
            f = self.comps[()]
            return TensorPoly(n, "vector", {(a,): z_field(a, f) for a in range(1, n + 1)})
        if self.channel == "vector":
            out = {}
            half = Fraction(1, 2)
            for a in range(1, n + 1):
                for b in range(a, n + 1):
                    out[(a, b)] = (z_field(a, self.comps[(b,)]) + z_field(b, self.comps[(a,)])).scale(half)
            return TensorPoly(n, "sym2", out)
        raise ValueError("symmetrized insertion is not closed on the sym2 channel")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "channel": self.channel,
            "components": {",".join(map(str, k)): v.to_json() for k, v in self.comps.items()},
        }


# -- random data for property checks ---------------------------------------


def random_heis_poly(n: int, rng: random.Random, max_weight: int = 6, terms: int = 4, complex_coeffs: bool = True) -> HeisPoly:
    """A random polynomial with small integer coefficients and Heisenberg
    weight at most ``max_weight``."""
    out = {}
    for _ in range(terms):
        budget = rng.randint(0, max_weight)
        e = [0] * (2 * n + 1)
        while budget > 0:
            slot = rng.randrange(2 * n + 1)
            cost = 2 if slot == 2 * n else 1
            if cost > budget:
                continue
            e[slot] += 1
            budget -= cost
        re_ = rng.randint(-5, 5)
        im_ = rng.randint(-5, 5) if complex_coeffs else 0
        if re_ == 0 and im_ == 0:
            re_ = 1
        c = GaussianRational(re_, im_)
        e = tuple(e)
        out[e] = out.get(e, ZERO) + c
    return HeisPoly(n, out)


def random_tensor_poly(n: int, channel: str, rng: random.Random, **kwargs) -> TensorPoly:
    t = TensorPoly(n, channel)
    return TensorPoly(n, channel, {k: random_heis_poly(n, rng, **kwargs) for k in t.keys()})


# -- symbolic verification of the frame ------------------------------------


class VectorField:
    """First-order operator sum_j coeffs[j] d/dx_j in coordinates
    (z.., zb.., t) with polynomial coefficients."""

    def __init__(self, n: int, coeffs: Mapping[int, HeisPoly]):
        self.n = n
        self.coeffs = {j: c for j, c in coeffs.items() if c}

    def __call__(self, p: HeisPoly) -> HeisPoly:
        total = HeisPoly.zero(self.n)
        for j, c in self.coeffs.items():
            total = total + c * partial(p, j)
        return total

    def bracket(self, other: VectorField) -> VectorField:
        slots = set(self.coeffs) | set(other.coeffs)
        zero = HeisPoly.zero(self.n)
        return VectorField(
            self.n,
            {j: self(other.coeffs.get(j, zero)) - other(self.coeffs.get(j, zero)) for j in slots},
        )

    def scale(self, c) -> VectorField:
        return VectorField(self.n, {j: v.scale(c) for j, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self.coeffs == other.coeffs


def partial(p: HeisPoly, slot: int) -> HeisPoly:
    out = {}
    for e, c in p.terms.items():
        k = e[slot]
        if k:
            f = list(e)
            f[slot] -= 1
            out[tuple(f)] = c * k
    return HeisPoly._trusted(p.n, out)


def frame_vector_fields(n: int) -> dict[str, VectorField]:
    """T, Z_a and Zb_a as coordinate vector fields."""
    ti = 2 * n
    fields = {"T": VectorField(n, {ti: HeisPoly.constant(n, 2)})}
    for a in range(1, n + 1):
        fields[f"Z{a}"] = VectorField(n, {a - 1: HeisPoly.constant(n), ti: HeisPoly.zb(n, a).scale(I)})
        fields[f"Zb{a}"] = VectorField(n, {n + a - 1: HeisPoly.constant(n), ti: HeisPoly.z(n, a).scale(-I)})
    return fields


def contact_form(n: int) -> dict[int, HeisPoly]:
    """theta = (dt + i sum(z dzb - zb dz)) / 2 as coordinate coefficients."""
    half = Fraction(1, 2)
    form = {2 * n: HeisPoly.constant(n, half)}
    for a in range(1, n + 1):
        form[n + a - 1] = HeisPoly.z(n, a).scale(I * half)
        form[a - 1] = HeisPoly.zb(n, a).scale(-I * half)
    return form


def _pair(form: Mapping[int, HeisPoly], v: VectorField) -> HeisPoly:
    total = HeisPoly.zero(v.n)
    for j, c in v.coeffs.items():
        if j in form:
            total = total + form[j] * c
    return total


def _d_form(form, x: VectorField, y: VectorField) -> HeisPoly:
    return x(_pair(form, y)) - y(_pair(form, x)) - _pair(form, x.bracket(y))


def check_frame_relations(n: int) -> Report:
    """Verify the contact and bracket identities of the standard frame by
    symbolic vector-field calculus."""
    rep = Report(f"Heisenberg frame relations, n={n}")
    fields = frame_vector_fields(n)
    theta = contact_form(n)
    T = fields["T"]
    zero_field = VectorField(n, {})
    one = HeisPoly.constant(n)
    rep.add("theta(T)=1", "Reeb normalization", _pair(theta, T) == one)
    coords = [VectorField(n, {j: one}) for j in range(2 * n + 1)]
    rep.add("T _| dtheta = 0", "Reeb characterization", all(not _d_form(theta, T, c) for c in coords))
    for a in range(1, n + 1):
        rep.add(f"theta(Z{a})=0", "contact distribution", not _pair(theta, fields[f"Z{a}"]))
        rep.add(f"theta(Zb{a})=0", "contact distribution", not _pair(theta, fields[f"Zb{a}"]))
        rep.add(f"[Z{a},T]=0", "T central", fields[f"Z{a}"].bracket(T) == zero_field)
        rep.add(f"[Zb{a},T]=0", "T central", fields[f"Zb{a}"].bracket(T) == zero_field)
        for b in range(1, n + 1):
            za, zbb = fields[f"Z{a}"], fields[f"Zb{b}"]
            expected = T.scale(-I) if a == b else zero_field
            rep.add(f"[Z{a},Zb{b}]={'-iT' if a == b else '0'}", "[Z_a,Zb_b] = -i delta T", za.bracket(zbb) == expected)
            rep.add(f"[Z{a},Z{b}]=0", "[Z_a,Z_b] = 0", za.bracket(fields[f"Z{b}"]) == zero_field)
            levi = _d_form(theta, za, zbb).scale(-I)
            rep.add(
                f"h(Z{a},Zb{b})={1 if a == b else 0}",
                "h(Z,Wb) = -i dtheta(Z,Wb)",
                levi == HeisPoly.constant(n, 1 if a == b else 0),
            )
    # the operator implementation matches the vector fields on random input
    rng = random.Random(n)
    probe = random_heis_poly(n, rng, max_weight=5, terms=6)
    ok = reeb(probe) == T(probe)
    for a in range(1, n + 1):
        ok &= z_field(a, probe) == fields[f"Z{a}"](probe)
        ok &= zbar_field(a, probe) == fields[f"Zb{a}"](probe)
    rep.add("field actions agree with vector fields", "coordinate realization", ok)
    return rep
