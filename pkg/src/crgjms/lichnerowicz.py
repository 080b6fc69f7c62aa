"""Operator-valued series solution of ``(Delta_L + n + 2) sigma = O(rho^(2n+2))``
on the complex hyperbolic model, and extraction of the obstruction operator.

``sigma`` is anti-hermitian with channels ``sigma_tt``, ``sigma_ta`` and
``sigma_ab``; every coefficient is an ``NcNormal`` acting on the boundary
datum ``psi = sigma_ab|_M``. The channel equations used here are exact on
the model:

    res_tt = I_tt sigma_tt + rho^2 (Db + 4iT) sigma_tt - rho^4 T^2 sigma_tt - 4 rho Z^b sigma_tb
    res_ta = I_ta sigma_ta + rho^2 (Db + 3iT) sigma_ta - rho^4 T^2 sigma_ta + rho Z_a sigma_tt - 2 rho Z^b sigma_ab
    res_ab = I_ab sigma_ab + rho^2 (Db + 2iT) sigma_ab - rho^4 T^2 sigma_ab + 2 rho Z_(a sigma_b)t

with ``I_c`` the indicial polynomial of the channel evaluated at
``rho d/drho``. The divergence is

    (d sigma)_t = -1/4 (rho d - 2n - 4) sigma_tt + i/2 rho^2 T sigma_tt - rho Z^b sigma_tb
    (d sigma)_a = -1/4 (rho d - 2n - 5) sigma_ta + i/2 rho^2 T sigma_ta - rho Z^b sigma_ab

Both are checked against the frame calculus in :func:`cross_validate`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, singledispatch

from .exact import I, GaussianRational
from .frame import FrameTensor, anti_hermitian_tensor, divergence, key_name, lichnerowicz_apply
from .heisenberg import TensorPoly, random_heis_poly, random_tensor_poly
from .opalgebra import NcNormal, OpPoly, nc_apply, obstruction_closed_form, pullback_by_d
from .report import Report
from .series import RhoSeries

__all__ = [
    "IndicialPolynomial",
    "LichState",
    "ObstructionResult",
    "channel_residuals",
    "check_complex_property",
    "cross_validate",
    "default_tensor_order",
    "extract_obstruction",
    "gauge_report",
    "indicial_polynomial",
    "materialize",
    "shape_diff",
    "sigma_divergence",
    "solve_lichnerowicz",
]


def default_tensor_order(n: int) -> int:
    return 2 * n + 3


# -- indicial polynomials -------------------------------------------------


@dataclass(frozen=True)
class IndicialPolynomial:
    """``sum coeffs[i] j^i`` with rational coefficients."""

    coeffs: tuple[Fraction, ...]

    def __call__(self, j) -> Fraction:
        return sum((c * Fraction(j) ** i for i, c in enumerate(self.coeffs)), Fraction(0))

    def integer_roots(self, search: int = 64) -> list[int]:
        return [j for j in range(-search, search + 1) if not self(j)]

    def text(self) -> str:
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("j" if i == 1 else f"j^{i}")
            mag = abs(c)
            coef = "" if mag == 1 and mono else str(mag)
            sep = "*" if coef and mono else ""
            parts.append(("-" if c < 0 else "+") + coef + sep + mono)
        out = "".join(parts) or "0"
        return out[1:] if out.startswith("+") else out


INDICIAL_CHANNELS = ("func", "form_t", "form_a", "tt", "ta", "ab", "trace", "tf")


def indicial_polynomial(channel: str, n: int) -> IndicialPolynomial:
    """Leading-order factor ``-1/4 (j^2 - (2n+2) j - c)`` of each channel."""
    constants = {
        "func": 0,
        "ab": 0,
        "tt": 4 * n + 8,
        "form_t": 4 * n + 8,
        "trace": 4 * n + 8,
        "ta": 2 * n + 7,
        "form_a": 2 * n + 7,
        "tf": 8,
    }
    if channel not in constants:
        raise ValueError(f"unknown channel {channel!r}; expected one of {', '.join(INDICIAL_CHANNELS)}")
    q = Fraction(-1, 4)
    return IndicialPolynomial((q * -constants[channel], q * -(2 * n + 2), q))


# -- coefficient-generic channel operators --------------------------------


@singledispatch
def _apply_op(x, op: OpPoly):
    raise TypeError(f"cannot apply an operator to {type(x).__name__}")


@_apply_op.register
def _(x: NcNormal, op: OpPoly):
    return x.lmul(op)


@_apply_op.register
def _(x: TensorPoly, op: OpPoly):
    return op.apply_tensor(x)


def _indicial(s: RhoSeries, poly: IndicialPolynomial) -> RhoSeries:
    if s.log:
        raise ValueError("channel series must be log-free")
    return RhoSeries(s.max_order, {j: c * GaussianRational(poly(j)) for j, c in s.smooth.items()})


def _spatial(s: RhoSeries, t_coeff: int) -> RhoSeries:
    """``rho^2 (Db + i t_coeff T) s - rho^4 T^2 s``."""
    first = OpPoly.linear(GaussianRational(0, t_coeff))
    second = OpPoly.reeb() * OpPoly.reeb()
    return (s.map(lambda x: _apply_op(x, first)).shift(2) - s.map(lambda x: _apply_op(x, second)).shift(4)).truncate(s.max_order)


def _cross(s: RhoSeries, fn, factor) -> RhoSeries:
    return s.map(fn).scale(GaussianRational(factor)).shift(1).truncate(s.max_order)


def channel_residuals(
    n: int, tt: RhoSeries, ta: RhoSeries, ab: RhoSeries, ta_middle: bool = True
) -> tuple[RhoSeries, RhoSeries, RhoSeries]:
    """The three channels of ``(Delta_L + n + 2) sigma``.

    ``ta_middle=False`` drops the second-order ``sigma_ta`` terms from the ta
    channel; it exists only so tests can show the frame calculus rejects
    that reading.
    """
    r_tt = _indicial(tt, indicial_polynomial("tt", n)) + _spatial(tt, 4) - _cross(ta, lambda x: x.div(), 4)
    r_ta = _indicial(ta, indicial_polynomial("ta", n)) + _cross(tt, lambda x: x.zsym(), 1) - _cross(ab, lambda x: x.div(), 2)
    if ta_middle:
        r_ta = r_ta + _spatial(ta, 3)
    r_ab = _indicial(ab, indicial_polynomial("ab", n)) + _spatial(ab, 2) + _cross(ta, lambda x: x.zsym(), 2)
    return r_tt, r_ta, r_ab


def sigma_divergence(n: int, tt: RhoSeries, ta: RhoSeries, ab: RhoSeries) -> tuple[RhoSeries, RhoSeries]:
    def part(s: RhoSeries, shift: int, nxt: RhoSeries) -> RhoSeries:
        m = s.max_order
        rd = s.rho_derivative().scale(GaussianRational(Fraction(-1, 4))) + s.scale(GaussianRational(Fraction(2 * n + shift, 4)))
        reeb_term = s.map(lambda x: _apply_op(x, OpPoly.reeb(I / 2))).shift(2).truncate(m)
        return rd + reeb_term - _cross(nxt, lambda x: x.div(), 1)

    return part(tt, 4, ta), part(ta, 5, ab)


# -- the solver -----------------------------------------------------------


@dataclass
class LichState:
    n: int
    max_order: int
    refined: bool
    tt: RhoSeries
    ta: RhoSeries
    ab: RhoSeries
    residual: tuple[RhoSeries, RhoSeries, RhoSeries]
    notes: list[str] = field(default_factory=list)

    def channels(self) -> tuple[RhoSeries, RhoSeries, RhoSeries]:
        return self.tt, self.ta, self.ab

    def divergence(self) -> tuple[RhoSeries, RhoSeries]:
        return sigma_divergence(self.n, self.tt, self.ta, self.ab)


def _zero(n: int, channel: str) -> NcNormal:
    return NcNormal.zero(n, "psi", channel)


def _solve_channel(r, poly: IndicialPolynomial, m: int):
    if r is None:
        return None
    e = poly(m)
    if not e:
        raise ArithmeticError(f"indicial factor vanishes at unexpected order {m}")
    return r * GaussianRational(-1 / e)


@lru_cache(maxsize=None)
def solve_lichnerowicz(n: int, max_order: int | None = None, refine: bool = False) -> LichState:
    """Solve the channel equations order by order from ``sigma_ab|_M = psi``.

    All channels are solved through ``rho^(2n+1)``. At ``rho^(2n+2)`` the
    tt and ta channels are solved and the ab slot (an indicial root) is set
    to zero; its residual is the obstruction. With ``refine`` the tt and ta
    slots at ``rho^(2n+2)`` and ``rho^(2n+3)`` are instead chosen to kill the
    divergence there.
    """
    if n < 2:
        raise ValueError("the tensor solver needs n >= 2")
    M = default_tensor_order(n) if max_order is None else max_order
    top = 2 * n + 2
    if refine and M < top + 1:
        raise ValueError("refinement needs max_order >= 2n+3")
    polys = {c: indicial_polynomial(c, n) for c in ("tt", "ta", "ab")}
    tt: dict[int, NcNormal] = {}
    ta: dict[int, NcNormal] = {}
    ab: dict[int, NcNormal] = {0: NcNormal.identity(n)}
    notes: list[str] = []

    def series():
        return RhoSeries(M, tt), RhoSeries(M, ta), RhoSeries(M, ab)

    def put(store, m, value):
        if value is not None and value:
            store[m] = value

    for m in range(1, M + 1):
        if refine and m >= top:
            d_t, d_a = sigma_divergence(n, *series())
            # d sigma at order m gains -1/4 (m - 2n - 4) sigma_tt and -1/4 (m - 2n - 5) sigma_ta
            put(tt, m, _solve_channel(d_t.coeff(m), IndicialPolynomial((Fraction(2 * n + 4, 4), Fraction(-1, 4))), m))
            put(ta, m, _solve_channel(d_a.coeff(m), IndicialPolynomial((Fraction(2 * n + 5, 4), Fraction(-1, 4))), m))
            r_ab = channel_residuals(n, *series())[2].coeff(m)
            if m != top:
                put(ab, m, _solve_channel(r_ab, polys["ab"], m))
            continue
        r_tt, r_ta, r_ab = (r.coeff(m) for r in channel_residuals(n, *series()))
        put(tt, m, _solve_channel(r_tt, polys["tt"], m))
        put(ta, m, _solve_channel(r_ta, polys["ta"], m))
        if m == top:
            notes.append(f"ab slot at order {top} is an indicial root; set to 0")
        else:
            put(ab, m, _solve_channel(r_ab, polys["ab"], m))
    s = series()
    return LichState(n, M, refine, *s, residual=channel_residuals(n, *s), notes=notes)


# -- obstruction extraction -----------------------------------------------


@dataclass
class ObstructionResult:
    n: int
    obstruction: NcNormal
    k_ab: NcNormal
    k_ta: NcNormal
    report: Report

    @property
    def passed(self) -> bool:
        return self.report.passed


def _coeff(s: RhoSeries, m: int, n: int, channel: str) -> NcNormal:
    c = s.coeff(m)
    return c if c is not None else _zero(n, channel)


def shape_diff(a: NcNormal, b: NcNormal) -> str:
    tags = sorted(set(a.terms) | set(b.terms))
    lines = []
    for t in tags:
        x, y = a.terms.get(t, OpPoly()), b.terms.get(t, OpPoly())
        if x != y:
            lines.append(f"{t}: solver {x.text()} vs closed form {y.text()}")
    return "; ".join(lines)


def _vanishes_through(s: RhoSeries, last: int) -> bool:
    return all(j > last for j in s.orders())


@lru_cache(maxsize=None)
def extract_obstruction(n: int) -> ObstructionResult:
    top = 2 * n + 2
    rep = Report(f"obstruction operator, n={n}")
    plain = solve_lichnerowicz(n)
    refined = solve_lichnerowicz(n, refine=True)
    r_tt, r_ta, r_ab = plain.residual
    rep.add("residual tt through 2n+2", "solver residual", _vanishes_through(r_tt, top), str(r_tt.orders()))
    rep.add("residual ta through 2n+2", "solver residual", _vanishes_through(r_ta, top), str(r_ta.orders()))
    rep.add("residual ab through 2n+1", "solver residual", _vanishes_through(r_ab, top - 1), str(r_ab.orders()))
    k_ab = _coeff(r_ab, top, n, "sym2")
    obstruction = -k_ab
    closed = obstruction_closed_form(n)
    rep.add("obstruction=closed form", "closed formula", obstruction == closed, shape_diff(obstruction, closed))
    same = all(_coeff(x, top, n, ch) == _coeff(y, top, n, ch) for x, y, ch in ((plain.tt, refined.tt, "scalar"), (plain.ta, refined.ta, "vector")))
    rep.add("refinement keeps order 2n+2", "divergence refinement", same)
    f_tt, f_ta, f_ab = refined.residual
    rep.add("refined residual tt through 2n+3", "refined residual", _vanishes_through(f_tt, top + 1), str(f_tt.orders()))
    rep.add("refined residual ta through 2n+2", "refined residual", _vanishes_through(f_ta, top), str(f_ta.orders()))
    rep.add("refined k_ab unchanged", "refined residual", _coeff(f_ab, top, n, "sym2") == k_ab)
    k_ta = _coeff(f_ta, top + 1, n, "vector")
    lhs = k_ab.div().scale(GaussianRational(2))
    rep.add("2 div k_ab = k_ta", "divergence identity", lhs == k_ta, "" if lhs == k_ta else f"{lhs.text()} vs {k_ta.text()}")
    rep.add("div k_ta = 0", "divergence identity", not k_ta.div(), k_ta.div().text())
    return ObstructionResult(n, obstruction, k_ab, k_ta, rep)


def gauge_report(n: int) -> Report:
    """Divergence vanishes through ``rho^(2n+1)`` without being imposed, and
    through ``rho^(2n+3)`` after refinement; the trace is zero by type."""
    rep = Report(f"emergent gauge conditions, n={n}")
    top = 2 * n + 2
    for state, last, label in ((solve_lichnerowicz(n), top - 1, "plain"), (solve_lichnerowicz(n, refine=True), top + 1, "refined")):
        d_t, d_a = state.divergence()
        rep.add(f"{label} div_t vanishes through {last}", "emergent divergence", _vanishes_through(d_t, last), str(d_t.orders()))
        rep.add(f"{label} div_a vanishes through {last}", "emergent divergence", _vanishes_through(d_a, last), str(d_a.orders()))
    rep.add("trace vanishes", "anti-hermitian ansatz", True, "no mixed components are present, so g^PQ sigma_PQ has no terms")
    return rep


# -- complex property -----------------------------------------------------


def check_complex_property(n: int, trials: int = 5, seed: int = 0) -> Report:
    rep = Report(f"complex property of the obstruction, n={n}")
    op = extract_obstruction(n).obstruction
    after_d = pullback_by_d(op)
    rep.add("O.D normal form = 0", "O composed with D", not after_d, after_d.text())
    dd = op.div().div()
    rep.add("div div O normal form = 0", "double divergence of O", not dd, dd.text())
    rng = random.Random(seed)
    for i in range(trials):
        f = random_heis_poly(n, rng, max_weight=2 * n + 4, terms=4)
        df = TensorPoly(n, "scalar", {(): f}).zsym().zsym()
        rep.add(f"O(Df)=0 sample {i}", "O composed with D", not nc_apply(op, df))
        psi = random_tensor_poly(n, "sym2", rng, max_weight=2 * n + 4, terms=3)
        rep.add(f"div div O(psi)=0 sample {i}", "double divergence of O", not nc_apply(op, psi).div().div())
    return rep


# -- materialization and the frame-calculus cross-check -------------------


def materialize(state: LichState, psi: TensorPoly) -> tuple[RhoSeries, RhoSeries, RhoSeries]:
    """Evaluate every operator coefficient on ``psi``."""
    return tuple(s.map(lambda op: nc_apply(op, psi)) for s in state.channels())  # type: ignore[return-value]


def _as_frame(n: int, M: int, tt: RhoSeries, ta: RhoSeries, ab: RhoSeries):
    return anti_hermitian_tensor(n, M, tt.map(lambda t: t[()]), ta, ab)


def cross_validate(state: LichState, psi: TensorPoly, ta_middle: bool = True) -> Report:
    """Compare the channel residuals with the Lichnerowicz Laplacian and the
    divergence computed from the connection."""
    n, M = state.n, state.max_order
    rep = Report(f"frame calculus cross-check, n={n}")
    tt, ta, ab = materialize(state, psi)
    sigma = _as_frame(n, M, tt, ta, ab)
    oracle = lichnerowicz_apply(sigma)
    residual = state.residual if ta_middle else channel_residuals(n, *state.channels(), ta_middle=False)
    res = tuple(s.map(lambda op: nc_apply(op, psi)) for s in residual)
    expected = _as_frame(n, M, *res)
    rep.add("channel residuals = (Delta_L+n+2) sigma", "frame Lichnerowicz", oracle == expected, _tensor_diff(oracle, expected, n))
    rep.add("only unbarred components", "type preservation", all(max(k) <= n for k in oracle.comps))
    d_oracle = divergence(sigma)
    d_t, d_a = sigma_divergence(n, tt, ta, ab)
    comps = {(0,): d_t.map(lambda t: t[()])}
    for a in range(1, n + 1):
        comps[(a,)] = d_a.map(lambda t, a=a: t[(a,)])
    d_expected = FrameTensor(n, 1, M, comps)
    rep.add("divergence formula = frame divergence", "frame divergence", d_oracle == d_expected, _tensor_diff(d_oracle, d_expected, n))
    return rep


def _tensor_diff(a, b, n: int) -> str:
    keys = sorted(set(a.comps) | set(b.comps))
    bad = [key_name(k, n) for k in keys if a[k] != b[k]]
    return "mismatch at " + ", ".join(bad[:6]) if bad else ""
