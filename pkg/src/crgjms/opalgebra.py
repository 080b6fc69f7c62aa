"""Operator algebra on the flat model.

:class:`OpPoly` is the commutative ring of polynomials in the sub-Laplacian
``Δ_b`` and the Reeb field ``T``. :class:`NcNormal` is a normal form for
operators built from ``Δ_b``, ``T``, ``Z_a`` insertions and ``Z^g``
contractions acting on a symmetric 2-tensor ``psi`` (or on a scalar ``f``),
written as a sum of OpPoly coefficients in front of a fixed shape basis.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt

from .exact import I, ONE, ZERO, GaussianRational, as_gaussian
from .heisenberg import HeisPoly, TensorPoly, random_tensor_poly, reeb, sublaplacian
from .report import Report

__all__ = [
    "BasisOverflowError",
    "BiPoly",
    "NcExpr",
    "NcNormal",
    "OpPoly",
    "SHAPES",
    "c_k",
    "gjms_product",
    "nc_apply",
    "nc_normalize",
    "obstruction_closed_form",
    "pullback_by_d",
    "qpoly",
    "rule_engine",
    "verify_rules",
]

Key = tuple[int, int]


class _Bivariate:
    """Sparse commutative polynomial in two symbols."""

    NAMES = ("x", "y")
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = as_gaussian(c)
            if c:
                clean[(int(k[0]), int(k[1]))] = c
        self.terms: dict[Key, GaussianRational] = clean

    @classmethod
    def _trusted(cls, terms: dict[Key, GaussianRational]):
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c=1):
        return cls({(0, 0): c})

    @classmethod
    def gen(cls, which: int, c=1):
        return cls({(1, 0) if which == 0 else (0, 1): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, _Bivariate):
            return type(self) is type(other) and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == type(self).const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def _lift(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return type(self).const(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._trusted(out)

    __radd__ = __add__

    def __neg__(self):
        return self._trusted({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_gaussian(c)
        if not c:
            return self._trusted({})
        return self._trusted({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        if not isinstance(other, type(self)):
            return NotImplemented
        out: dict[Key, GaussianRational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                v = c1 * c2
                s = out.get(k)
                out[k] = v if s is None else s + v
        return self._trusted({k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        result, base = type(self).const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Key, GaussianRational]]:
        """Descending graded lex: total degree, then first-symbol exponent."""
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]), reverse=True)

    def leading_coefficient(self) -> GaussianRational:
        terms = self.sorted_terms()
        return terms[0][1] if terms else ZERO

    def substitute(self, x: _Bivariate, y: _Bivariate, target: type | None = None):
        """Evaluate at ``(x, y)``; the result lives in the class of ``x``."""
        cls = target or type(x)
        total = cls.const(0)
        xp = {0: cls.const(1)}
        yp = {0: cls.const(1)}
        for (a, b), c in self.terms.items():
            for table, base, e in ((xp, x, a), (yp, y, b)):
                k = max(table)
                while k < e:
                    table[k + 1] = table[k] * base
                    k += 1
            total = total + (xp[a] * yp[b]).scale(c)
        return total

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.text()!r})"

    def __str__(self) -> str:
        return self.text()

    # rendering

    def _mono(self, k: Key, sep: str, latex: bool) -> str:
        names = self.LATEX_NAMES if latex else self.NAMES
        parts = []
        for name, e in zip(names, k):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{{{e}}}" if latex and e > 9 else f"{name}^{e}")
        return sep.join(parts)

    LATEX_NAMES = ("x", "y")

    def text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for idx, (k, c) in enumerate(self.sorted_terms()):
            mono = self._mono(k, " ", latex=False)
            sign, body = _coeff_text(c, bool(mono), latex=False)
            term = body + (("·" if body and not body.endswith("-") else "") + mono if mono else "")
            if idx == 0:
                chunks.append(("-" if sign < 0 else "") + term)
            else:
                chunks.append((" - " if sign < 0 else " + ") + term)
        return "".join(chunks)

    def latex(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for idx, (k, c) in enumerate(self.sorted_terms()):
            mono = self._mono(k, " ", latex=True)
            sign, body = _coeff_text(c, bool(mono), latex=True)
            term = body + mono
            if idx == 0:
                chunks.append(("-" if sign < 0 else "") + term)
            else:
                chunks.append(("-" if sign < 0 else "+") + term)
        return "".join(chunks)


def _frac_text(r: Fraction, latex: bool) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    if latex:
        return f"\\frac{{{r.numerator}}}{{{r.denominator}}}"
    return str(r)


def _coeff_text(c: GaussianRational, has_mono: bool, latex: bool) -> tuple[int, str]:
    """(sign, magnitude text); unit magnitudes vanish next to a monomial."""
    re_, im_ = c.re, c.im
    if im_ == 0:
        sign = -1 if re_ < 0 else 1
        mag = abs(re_)
        if mag == 1 and has_mono:
            return sign, ""
        return sign, _frac_text(mag, latex)
    if re_ == 0:
        sign = -1 if im_ < 0 else 1
        mag = abs(im_)
        return sign, ("" if mag == 1 else _frac_text(mag, latex)) + "i"
    inner = f"{_frac_text(re_, latex)}{'-' if im_ < 0 else '+'}{'' if abs(im_) == 1 else _frac_text(abs(im_), latex)}i"
    return 1, f"({inner})"


class BiPoly(_Bivariate):
    """Polynomial in formal symbols x, y (used for the q-polynomials)."""

    NAMES = ("x", "y")
    LATEX_NAMES = ("x", "y")
    __slots__ = ()


class OpPoly(_Bivariate):
    """Polynomial in ``Δ_b`` and ``T``; ``terms[(a, b)]`` multiplies ``Δ_b^a T^b``."""

    NAMES = ("Δ_b", "T")
    LATEX_NAMES = ("\\Delta_b", "T")
    __slots__ = ()

    @classmethod
    def delta_b(cls, c=1) -> OpPoly:
        return cls({(1, 0): c})

    @classmethod
    def reeb(cls, c=1) -> OpPoly:
        return cls({(0, 1): c})

    @classmethod
    def linear(cls, t_coeff) -> OpPoly:
        """``Δ_b + t_coeff·T``."""
        return cls({(1, 0): 1, (0, 1): t_coeff})

    def sublaplacian(self) -> OpPoly:
        return self * OpPoly.delta_b()

    def reeb_action(self) -> OpPoly:
        return self * OpPoly.reeb()

    def shift(self, c) -> OpPoly:
        """Substitute ``Δ_b -> Δ_b + c·T``."""
        c = as_gaussian(c)
        if not c:
            return self
        return self.substitute(OpPoly.linear(c), OpPoly.reeb())

    def adjoint(self) -> OpPoly:
        """Formal adjoint: ``Δ_b`` and ``iT`` fixed, coefficients conjugated.
        Since ``T* = -T`` this sends ``c Δ_b^a T^b`` to ``conj(c)(-1)^b Δ_b^a T^b``."""
        return self._trusted({(a, b): (c.conjugate() if b % 2 == 0 else -c.conjugate()) for (a, b), c in self.terms.items()})

    def apply(self, p: HeisPoly) -> HeisPoly:
        """Act on a polynomial with the concrete ``Δ_b`` and ``T``."""
        total = HeisPoly.zero(p.n)
        by_t: dict[int, list[int]] = {}
        for a, b in self.terms:
            by_t.setdefault(b, []).append(a)
        t_pow = p
        b_done = 0
        for b in sorted(by_t):
            while b_done < b:
                t_pow = reeb(t_pow)
                b_done += 1
            cur, a_done = t_pow, 0
            for a in sorted(by_t[b]):
                while a_done < a:
                    cur = sublaplacian(cur)
                    a_done += 1
                total = total + cur.scale(self.terms[(a, b)])
        return total

    def apply_tensor(self, t: TensorPoly) -> TensorPoly:
        return t.map(self.apply)

    def factor_linear(self) -> tuple[GaussianRational, list[int], int] | None:
        """Write ``self = lead · T^r · prod(Δ_b + i m T)`` with integer m.

        Returns ``(lead, [m...], r)`` or None when no such factorization
        exists (not homogeneous, or a root is not of the form ``-i m``).
        """
        if not self.terms:
            return None
        d = self.degree()
        if any(a + b != d for a, b in self.terms):
            return None
        r = min(b for _, b in self.terms)
        deg = d - r
        # coefficients of u(x) = p(x, 1) / ..., index = power of x
        coeffs = [self.terms.get((a, d - a), ZERO) for a in range(deg + 1)]
        lead = coeffs[deg]
        monic = [c / lead for c in coeffs]
        bound_sq = 1
        for c in monic[:-1]:
            bound_sq = max(bound_sq, c.norm())
        bound = isqrt(int(bound_sq) + 1) + 2
        roots: list[int] = []
        poly = monic
        while len(poly) > 1:
            for m in range(-bound, bound + 1):
                root = GaussianRational(0, -m)
                quotient, rem = _synthetic_division(poly, root)
                if not rem:
                    roots.append(m)
                    poly = quotient
                    break
            else:
                return None
        roots.sort(reverse=True)
        return lead, roots, r

    def factored_latex(self) -> str:
        """Product form when :meth:`factor_linear` succeeds, else expanded."""
        fac = self.factor_linear()
        if fac is None:
            return self.latex()
        lead, roots, r = fac
        if len(roots) + r < 2 and lead == 1:
            return self.latex()
        sign, body = _coeff_text(lead, True, latex=True)
        out = ("-" if sign < 0 else "") + body
        for m in roots:
            out += "\\Delta_b" if m == 0 else "(" + OpPoly.linear(GaussianRational(0, m)).latex() + ")"
        if r:
            out += "T" if r == 1 else f"T^{r}"
        return out

    def to_json(self, n: int | None = None) -> dict:
        obj = {"terms": [{"db": a, "t": b, "coeff": c.to_json()} for (a, b), c in self.sorted_terms()]}
        if n is not None:
            obj = {"n": n, **obj}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> OpPoly:
        return cls({(int(t["db"]), int(t["t"])): GaussianRational.from_json(t["coeff"]) for t in obj["terms"]})


def _synthetic_division(coeffs: list[GaussianRational], root: GaussianRational) -> tuple[list[GaussianRational], GaussianRational]:
    """Divide ``sum coeffs[k] x^k`` by ``x - root``."""
    deg = len(coeffs) - 1
    out = [ZERO] * deg
    carry = coeffs[deg]
    for k in range(deg - 1, -1, -1):
        out[k] = carry
        carry = coeffs[k] + carry * root
    return out, carry


# -- q-polynomials, GJMS products and constants ----------------------------


def qpoly(k: int, mode: str = "recurrence") -> BiPoly:
    """``q_k`` in x, y by the three-term recurrence or the product formula."""
    if k < 1:
        raise ValueError("k must be at least 1")
    x, y = BiPoly.gen(0), BiPoly.gen(1)
    if mode == "closed_form":
        out = BiPoly.const(1)
        for j in range(k):
            out = out * (x + y.scale(k - 1 - 2 * j))
        return out
    if mode != "recurrence":
        raise ValueError(f"unknown mode {mode!r}")
    prev, cur = BiPoly.const(1), x
    y2 = y * y
    for ell in range(2, k + 1):
        prev, cur = cur, x * cur - (y2 * prev).scale((ell - 1) * (k - ell + 1))
    return cur


def qpoly_as_operator(q: BiPoly) -> OpPoly:
    """Substitute ``x -> Δ_b``, ``y -> iT``."""
    return q.substitute(OpPoly.delta_b(), OpPoly.reeb(I), target=OpPoly)


def gjms_product(n: int, k: int) -> OpPoly:
    """``prod_{j=0}^{k-1} (Δ_b + i(k-1-2j)T)``."""
    if n < 1 or not 1 <= k <= n + 1:
        raise ValueError(f"need 1 <= k <= n+1, got n={n}, k={k}")
    out = OpPoly.const(1)
    for j in range(k):
        out = out * OpPoly.linear(GaussianRational(0, k - 1 - 2 * j))
    return out


def c_k(k: int) -> GaussianRational:
    """``2(-1)^(k+1) / (k!(k-1)!)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return GaussianRational(Fraction(2 * (-1) ** (k + 1), factorial(k) * factorial(k - 1)))


def shifted_product(n: int, top: int) -> OpPoly:
    """``prod_{k=0}^{top} (Δ_b + i(n+2-2k)T)``; empty product is 1."""
    out = OpPoly.const(1)
    for k in range(top + 1):
        out = out * OpPoly.linear(GaussianRational(0, n + 2 - 2 * k))
    return out


# -- shape basis -------------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    tag: str
    source: str
    channel: str
    steps: tuple[str, ...]
    latex: str


SHAPES: tuple[Shape, ...] = (
    Shape("psi", "psi", "sym2", (), r"\psi_{\alpha\beta}"),
    Shape("ZsymDivPsi", "psi", "sym2", ("div", "zsym"), r"Z_{(\alpha}Z^{\gamma}\psi_{\beta)\gamma}"),
    Shape("ZZdivdivPsi", "psi", "sym2", ("div", "div", "zsym", "zsym"), r"Z_{\alpha}Z_{\beta}Z^{\gamma}Z^{\delta}\psi_{\gamma\delta}"),
    Shape("divPsi", "psi", "vector", ("div",), r"Z^{\gamma}\psi_{\alpha\gamma}"),
    Shape("ZdivdivPsi", "psi", "vector", ("div", "div", "zsym"), r"Z_{\alpha}Z^{\gamma}Z^{\delta}\psi_{\gamma\delta}"),
    Shape("divdivPsi", "psi", "scalar", ("div", "div"), r"Z^{\gamma}Z^{\delta}\psi_{\gamma\delta}"),
    # scalar source, used to compose with D f = Z_(a Z_b) f
    Shape("ZZf", "f", "sym2", ("zsym", "zsym"), r"Z_{\alpha}Z_{\beta}f"),
    Shape("Zf", "f", "vector", ("zsym",), r"Z_{\alpha}f"),
    Shape("f", "f", "scalar", (), "f"),
)
SHAPE = {s.tag: s for s in SHAPES}
_SHAPE_ORDER = {s.tag: i for i, s in enumerate(SHAPES)}
SOURCE_CHANNEL = {"psi": "sym2", "f": "scalar"}


class BasisOverflowError(ValueError):
    """An operation left the closed shape basis."""


class NcNormal:
    """``sum_s coeffs[s] ∘ s`` over shapes ``s`` of one source and channel."""

    __slots__ = ("n", "source", "channel", "terms")

    def __init__(self, n: int, source: str, channel: str, terms: Mapping[str, OpPoly] | None = None):
        self.n = n
        self.source = source
        self.channel = channel
        clean = {}
        for tag, op in (terms or {}).items():
            shape = SHAPE.get(tag)
            if shape is None:
                raise KeyError(f"unknown shape {tag!r}")
            if shape.source != source or shape.channel != channel:
                raise BasisOverflowError(f"shape {tag} does not belong to the {source}/{channel} channel")
            if op:
                clean[tag] = op
        self.terms: dict[str, OpPoly] = dict(sorted(clean.items(), key=lambda kv: _SHAPE_ORDER[kv[0]]))

    @classmethod
    def identity(cls, n: int, source: str = "psi") -> NcNormal:
        return cls(n, source, SOURCE_CHANNEL[source], {source: OpPoly.const(1)})

    @classmethod
    def shape(cls, n: int, tag: str, op: OpPoly | None = None) -> NcNormal:
        s = SHAPE[tag]
        return cls(n, s.source, s.channel, {tag: op if op is not None else OpPoly.const(1)})

    @classmethod
    def zero(cls, n: int, source: str, channel: str) -> NcNormal:
        return cls(n, source, channel, {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcNormal):
            return NotImplemented
        return (self.n, self.source, self.channel, self.terms) == (other.n, other.source, other.channel, other.terms)

    def __hash__(self) -> int:
        return hash((self.n, self.source, self.channel, frozenset(self.terms.items())))

    def _check(self, other: NcNormal) -> None:
        if (self.n, self.source, self.channel) != (other.n, other.source, other.channel):
            raise ValueError(
                f"incompatible normal forms: {self.source}/{self.channel} n={self.n} vs {other.source}/{other.channel} n={other.n}"
            )

    def __add__(self, other: NcNormal) -> NcNormal:
        self._check(other)
        out = dict(self.terms)
        for tag, op in other.terms.items():
            out[tag] = out[tag] + op if tag in out else op
        return NcNormal(self.n, self.source, self.channel, out)

    def __neg__(self) -> NcNormal:
        return NcNormal(self.n, self.source, self.channel, {t: -op for t, op in self.terms.items()})

    def __sub__(self, other: NcNormal) -> NcNormal:
        return self + (-other)

    def scale(self, c) -> NcNormal:
        return NcNormal(self.n, self.source, self.channel, {t: op.scale(c) for t, op in self.terms.items()})

    def __mul__(self, c) -> NcNormal:
        if isinstance(c, (int, Fraction, GaussianRational)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def lmul(self, op: OpPoly) -> NcNormal:
        """Compose with an OpPoly on the left."""
        return NcNormal(self.n, self.source, self.channel, {t: op * q for t, q in self.terms.items()})

    # duck-typed hooks used by the series solvers
    def sublaplacian(self) -> NcNormal:
        return self.lmul(OpPoly.delta_b())

    def reeb(self) -> NcNormal:
        return self.lmul(OpPoly.reeb())

    def div(self) -> NcNormal:
        """Contract the last free index with ``Z^g``."""
        return rule_engine(self.n).div(self)

    def zsym(self) -> NcNormal:
        """Symmetrized insertion of ``Z_a``."""
        return rule_engine(self.n).zsym(self)

    def compose(self, inner: NcNormal) -> NcNormal:
        """``self ∘ inner`` where ``inner`` produces the tensor ``psi``."""
        if self.source != "psi" or inner.channel != "sym2" or inner.n != self.n:
            raise ValueError("inner operator must produce a symmetric 2-tensor")
        total = NcNormal.zero(self.n, inner.source, self.channel)
        for tag, op in self.terms.items():
            total = total + _apply_steps(inner, SHAPE[tag].steps).lmul(op)
        return total

    def prefactor(self) -> GaussianRational:
        """Leading coefficient of the first term, used to normalize output."""
        if not self.terms:
            return ONE
        return next(iter(self.terms.values())).leading_coefficient()

    def to_json(self) -> dict:
        pref = self.prefactor()
        return {
            "n": self.n,
            "source": self.source,
            "channel": self.channel,
            "prefactor": pref.render(),
            "terms": [{"shape": t, "op": (op.scale(pref.inverse())).to_json(self.n)} for t, op in self.terms.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> NcNormal:
        pref = GaussianRational.parse(obj["prefactor"])
        return cls(
            int(obj["n"]),
            obj["source"],
            obj["channel"],
            {t["shape"]: OpPoly.from_json(t["op"]).scale(pref) for t in obj["terms"]},
        )

    def text(self) -> str:
        if not self.terms:
            return "0"
        pref = self.prefactor()
        inv = pref.inverse()
        body = " + ".join(f"[{op.scale(inv).text()}]∘{tag}" for tag, op in self.terms.items())
        return f"{pref.render()} * ({body})"

    def latex(self, factored: bool = True) -> str:
        if not self.terms:
            return "0"
        pref = self.prefactor()
        inv = pref.inverse()
        parts = []
        for tag, op in self.terms.items():
            op = op.scale(inv)
            rendered = op.factored_latex() if factored else op.latex()
            if len(op.terms) > 1 and (not factored or op.factor_linear() is None or rendered == op.latex()):
                rendered = f"\\left({rendered}\\right)"
            parts.append(rendered + SHAPE[tag].latex)
        body = "+".join(parts).replace("+-", "-")
        sign, mag = _coeff_text(pref, True, latex=True)
        return f"{'-' if sign < 0 else ''}{mag}\\left[{body}\\right]"

    def __repr__(self) -> str:
        return f"NcNormal(n={self.n}, {self.source}->{self.channel}, {self.text()})"


# -- rewriting rules ---------------------------------------------------------


class RuleEngine:
    """Rewrite table for one value of n.

    Contracting past an OpPoly uses ``Z^a p(Δ_b, T) = p(Δ_b - 2iT, T) Z^a``;
    inserting uses ``Z_a p(Δ_b, T) = p(Δ_b + 2iT, T) Z_a``. The per-shape
    rules below express ``Z^g`` or ``Z_(a`` applied to a basis shape back in
    the basis.
    """

    def __init__(self, n: int):
        self.n = n
        quarter, half = Fraction(1, 4), Fraction(1, 2)
        # Z^a Z_a = -1/2 (Δ_b - i n T) on scalars
        trace = OpPoly.linear(GaussianRational(0, -n)).scale(-half)
        self.div_rules: dict[str, dict[str, OpPoly]] = {
            "psi": {"divPsi": OpPoly.const(1)},
            "ZsymDivPsi": {
                "divPsi": OpPoly.linear(GaussianRational(0, -(n + 2))).scale(-quarter),
                "ZdivdivPsi": OpPoly.const(half),
            },
            "ZZdivdivPsi": {"ZdivdivPsi": trace},
            "divPsi": {"divdivPsi": OpPoly.const(1)},
            "ZdivdivPsi": {"divdivPsi": trace},
            "ZZf": {"Zf": trace},
            "Zf": {"f": trace},
        }
        self.zsym_rules: dict[str, dict[str, OpPoly]] = {
            "divdivPsi": {"ZdivdivPsi": OpPoly.const(1)},
            "divPsi": {"ZsymDivPsi": OpPoly.const(1)},
            "ZdivdivPsi": {"ZZdivdivPsi": OpPoly.const(1)},
            "f": {"Zf": OpPoly.const(1)},
            "Zf": {"ZZf": OpPoly.const(1)},
        }
        self.down_shift = GaussianRational(0, -2)
        self.up_shift = GaussianRational(0, 2)

    def _rewrite(self, x: NcNormal, rules, shift, name: str) -> NcNormal:
        out: dict[str, OpPoly] = {}
        channel = None
        for tag, op in x.terms.items():
            rule = rules.get(tag)
            if rule is None:
                raise BasisOverflowError(f"basis overflow: {name} applied to shape {tag!r} leaves the shape basis")
            moved = op.shift(shift)
            for target, coeff in rule.items():
                channel = SHAPE[target].channel
                term = moved * coeff
                out[target] = out[target] + term if target in out else term
        if channel is None:
            channel = _NEXT_CHANNEL[name].get(x.channel)
            if channel is None:
                raise BasisOverflowError(f"basis overflow: {name} is undefined on the {x.channel} channel")
        return NcNormal(x.n, x.source, channel, out)

    def div(self, x: NcNormal) -> NcNormal:
        return self._rewrite(x, self.div_rules, self.down_shift, "contraction Z^g")

    def zsym(self, x: NcNormal) -> NcNormal:
        return self._rewrite(x, self.zsym_rules, self.up_shift, "insertion Z_(a")


_NEXT_CHANNEL = {
    "contraction Z^g": {"sym2": "vector", "vector": "scalar"},
    "insertion Z_(a": {"scalar": "vector", "vector": "sym2"},
}


def _apply_steps(x: NcNormal, steps: Iterable[str | OpPoly]) -> NcNormal:
    for step in steps:
        if isinstance(step, OpPoly):
            x = x.lmul(step)
        elif step == "div":
            x = x.div()
        elif step == "zsym":
            x = x.zsym()
        else:
            raise ValueError(f"unknown step {step!r}")
    return x


@lru_cache(maxsize=None)
def rule_engine(n: int) -> RuleEngine:
    """Rule table for ``n``; composite rules are re-checked on random
    polynomial tensors before the table is handed out."""
    engine = RuleEngine(n)
    report = verify_rules(n, trials=5, seed=n, engine=engine)
    if not report.passed:
        bad = ", ".join(c.id for c in report.failures())
        raise RuntimeError(f"rewrite rules failed polynomial verification for n={n}: {bad}")
    return engine


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class NcExpr:
    """Linear combination of compositions applied to a source.

    Each term is ``(coefficient, steps)``; steps run from the source outward
    and are ``"div"`` (contract with ``Z^g``), ``"zsym"`` (symmetrized
    ``Z_a`` insertion) or an :class:`OpPoly` composed on the left.
    """

    source: str
    terms: tuple[tuple[GaussianRational, tuple], ...]

    @classmethod
    def chain(cls, source: str, *steps) -> NcExpr:
        return cls(source, ((ONE, tuple(steps)),))

    def scale(self, c) -> NcExpr:
        c = as_gaussian(c)
        return NcExpr(self.source, tuple((c * k, s) for k, s in self.terms))

    def __add__(self, other: NcExpr) -> NcExpr:
        if other.source != self.source:
            raise ValueError("sources differ")
        return NcExpr(self.source, self.terms + other.terms)

    @classmethod
    def from_normal(cls, x: NcNormal) -> NcExpr:
        return cls(x.source, tuple((ONE, SHAPE[t].steps + (op,)) for t, op in x.terms.items()))

    def evaluate(self, data: TensorPoly) -> TensorPoly:
        """Direct evaluation on concrete polynomial data, step by step."""
        total = None
        for coeff, steps in self.terms:
            cur = data
            for step in steps:
                if isinstance(step, OpPoly):
                    cur = step.apply_tensor(cur)
                elif step == "div":
                    cur = cur.div()
                elif step == "zsym":
                    cur = cur.zsym()
                else:
                    raise ValueError(f"unknown step {step!r}")
            cur = cur.scale(coeff)
            total = cur if total is None else total + cur
        return total


def nc_normalize(expr: NcExpr | NcNormal, n: int) -> NcNormal:
    """Normal form of an expression; a normal form is returned unchanged."""
    if isinstance(expr, NcNormal):
        if expr.n != n:
            raise ValueError("dimension mismatch")
        return expr
    total = None
    for coeff, steps in expr.terms:
        part = _apply_steps(NcNormal.identity(n, expr.source), steps).scale(coeff)
        total = part if total is None else total + part
    if total is None:
        raise ValueError("empty expression has no channel")
    return total


def evaluate_shape(tag: str, data: TensorPoly) -> TensorPoly:
    cur = data
    for step in SHAPE[tag].steps:
        cur = cur.div() if step == "div" else cur.zsym()
    return cur


def nc_apply(op: NcNormal, data: TensorPoly, n: int | None = None) -> TensorPoly:
    """Evaluate a normal form on concrete polynomial data."""
    n = op.n if n is None else n
    if data.n != n or op.n != n:
        raise ValueError(f"dimension mismatch: operator n={op.n}, data n={data.n}, requested n={n}")
    if data.channel != SOURCE_CHANNEL[op.source]:
        raise ValueError(f"operator acts on {op.source} ({SOURCE_CHANNEL[op.source]}), got {data.channel}")
    total = TensorPoly(n, op.channel)
    for tag, q in op.terms.items():
        total = total + q.apply_tensor(evaluate_shape(tag, data))
    return total


def obstruction_closed_form(n: int) -> NcNormal:
    """Three-term normal form of the linearized obstruction operator."""
    if n < 2:
        raise ValueError("the obstruction operator needs n >= 2 (dimension >= 5)")
    pref = Fraction((-1) ** (n + 1), factorial(n) ** 2)
    return NcNormal(
        n,
        "psi",
        "sym2",
        {
            "psi": shifted_product(n, n).scale(pref),
            "ZsymDivPsi": shifted_product(n, n - 1).scale(pref * Fraction(4 * (n + 1), n + 2)),
            "ZZdivdivPsi": shifted_product(n, n - 2).scale(pref * Fraction(4 * n, n + 2)),
        },
    )


def pullback_by_d(op: NcNormal) -> NcNormal:
    """``op ∘ D`` with ``D f = Z_(a Z_b) f`` on the flat model."""
    return op.compose(NcNormal.identity(op.n, "f").zsym().zsym())


# -- rule verification -------------------------------------------------------


def _rule_checks(n: int, engine: RuleEngine):
    """Yield (rule id, lhs evaluator, rhs normal form, source) for every rule."""
    for tag, rule in engine.div_rules.items():
        rhs = NcNormal(n, SHAPE[tag].source, SHAPE[next(iter(rule))].channel, rule)
        yield f"Z^g {tag}", (lambda data, tag=tag: evaluate_shape(tag, data).div()), rhs, SHAPE[tag].source
    for tag, rule in engine.zsym_rules.items():
        rhs = NcNormal(n, SHAPE[tag].source, SHAPE[next(iter(rule))].channel, rule)
        yield f"Z_(a {tag}", (lambda data, tag=tag: evaluate_shape(tag, data).zsym()), rhs, SHAPE[tag].source


def verify_rules(n: int, trials: int = 5, seed: int = 0, engine: RuleEngine | None = None) -> Report:
    """Check each rewrite rule against direct polynomial evaluation."""
    engine = engine or RuleEngine(n)
    rng = random.Random(seed)
    rep = Report(f"rewrite rules, n={n}")
    inputs = {
        "psi": [random_tensor_poly(n, "sym2", rng, max_weight=5, terms=4) for _ in range(trials)],
        "f": [random_tensor_poly(n, "scalar", rng, max_weight=5, terms=4) for _ in range(trials)],
    }
    for rule_id, lhs, rhs, source in _rule_checks(n, engine):
        ok = all(lhs(d) == nc_apply(rhs, d) for d in inputs[source])
        rep.add(rule_id, "shape rewrite rule", ok)
    # commutation of Z^g and Z_(a past the sub-Laplacian and T
    vecs = [random_tensor_poly(n, "vector", rng, max_weight=5, terms=4) for _ in range(trials)]
    scal = [random_tensor_poly(n, "scalar", rng, max_weight=5, terms=4) for _ in range(trials)]
    db, t = OpPoly.delta_b(), OpPoly.reeb()
    ok = all(db.apply_tensor(v).div() == db.shift(engine.down_shift).apply_tensor(v.div()) for v in vecs)
    rep.add("[Z^a, Δ_b] = -2iT Z^a", "[Z^a,Δ_b] = -2iT Z^a", ok)
    ok = all(db.apply_tensor(f).zsym() == db.shift(engine.up_shift).apply_tensor(f.zsym()) for f in scal)
    rep.add("[Z_a, Δ_b] = 2iT Z_a", "conjugate commutation", ok)
    ok = all(t.apply_tensor(v).div() == t.apply_tensor(v.div()) for v in vecs)
    ok &= all(t.apply_tensor(f).zsym() == t.apply_tensor(f.zsym()) for f in scal)
    rep.add("[Z, T] = 0", "[Z^a,T] = 0", ok)
    return rep


def random_expression(n: int, rng: random.Random, source: str = "psi", max_steps: int = 5, terms: int = 2) -> NcExpr:
    """Random composition that stays inside the shape basis."""
    out = []
    for _ in range(terms):
        channel = SOURCE_CHANNEL[source]
        steps: list = []
        for _ in range(rng.randint(1, max_steps)):
            moves = ["op"]
            if channel != "scalar":
                moves.append("div")
            if channel != "sym2":
                moves.append("zsym")
            move = rng.choice(moves)
            if move == "op":
                steps.append(OpPoly({(rng.randint(0, 1), rng.randint(0, 1)): GaussianRational(rng.randint(-3, 3) or 1, rng.randint(-2, 2))}))
            else:
                steps.append(move)
                channel = _NEXT_CHANNEL["contraction Z^g" if move == "div" else "insertion Z_(a"][channel]
        out.append((GaussianRational(rng.randint(-3, 3) or 1, rng.randint(-3, 3)), tuple(steps)))
    # all terms must land in one channel; keep those matching the first
    first = _channel_after(source, out[0][1])
    return NcExpr(source, tuple(t for t in out if _channel_after(source, t[1]) == first))


def _channel_after(source: str, steps) -> str:
    channel = SOURCE_CHANNEL[source]
    for s in steps:
        if s == "div":
            channel = _NEXT_CHANNEL["contraction Z^g"][channel]
        elif s == "zsym":
            channel = _NEXT_CHANNEL["insertion Z_(a"][channel]
    return channel
