"""Formal series solutions of scalar Laplace-type equations in ``rho``.

The Laplacian of a metric with spatially constant profiles ``b(rho)``,
``c(rho)`` (both equal to 1 at the boundary) acts on ``rho``-series as

    -1/4 (rho d)^2 + (n+1)/2 rho d - 1/8 L(rho) rho d + rho^2/c Delta_b - rho^4/b T^2

with ``L = rho d log(b c^(2n))``. Coefficients may be polynomials
(``HeisPoly``), operators (``OpPoly``, giving operator-valued solutions) or
plain numbers, on which the spatial part acts as zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import singledispatch
from math import factorial

from .exact import ONE, ZERO, GaussianRational, as_gaussian, parse_fraction
from .heisenberg import HeisPoly, reeb, sublaplacian
from .opalgebra import NcNormal, OpPoly, c_k
from .report import Report
from .series import RhoSeries, add_opt

__all__ = [
    "EigenSolution",
    "LogSolution",
    "Profile",
    "ScalarLaplacian",
    "VolumeExpansion",
    "default_scalar_order",
    "extract_gjms",
    "frobenius_solve",
    "q_curvature",
    "q_transform",
    "solve_eigen",
    "solve_log",
    "total_q_check",
    "volume_coeffs",
]


def default_scalar_order(n: int) -> int:
    return 2 * n + 6


# -- spatial actions on coefficients --------------------------------------


@singledispatch
def _delta_b(x):
    return None


@_delta_b.register
def _(x: HeisPoly):
    return sublaplacian(x)


@_delta_b.register
def _(x: OpPoly):
    return x.sublaplacian()


@_delta_b.register
def _(x: NcNormal):
    return x.sublaplacian()


@singledispatch
def _reeb_sq(x):
    return None


@_reeb_sq.register
def _(x: HeisPoly):
    return reeb(reeb(x))


@_reeb_sq.register
def _(x: OpPoly):
    return x.reeb_action().reeb_action()


@_reeb_sq.register
def _(x: NcNormal):
    return x.reeb().reeb()


# -- profiles -------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Spatially constant profiles ``b``, ``c`` as finite coefficient maps.

    The constant terms are 1; a listed order-0 entry must say so.
    """

    n: int
    b: dict[int, Fraction] = field(default_factory=dict)
    c: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for name in ("b", "c"):
            data = {int(j): Fraction(v) for j, v in getattr(self, name).items()}
            if any(j < 0 for j in data):
                raise ValueError(f"profile {name} has a negative order")
            if data.get(0, 1) != 1:
                raise ValueError(f"profile {name} must equal 1 at rho=0")
            data[0] = Fraction(1)
            object.__setattr__(self, name, {j: v for j, v in sorted(data.items()) if v})

    @classmethod
    def flat(cls, n: int) -> Profile:
        return cls(n)

    def is_flat(self) -> bool:
        return self.b == {0: 1} and self.c == {0: 1}

    def series(self, which: str, max_order: int) -> RhoSeries:
        return RhoSeries(max_order, getattr(self, which))

    def to_json(self) -> dict:
        def enc(d):
            return [[j, str(v)] for j, v in d.items() if j > 0]

        return {"n": self.n, "b": enc(self.b), "c": enc(self.c)}

    @classmethod
    def from_json(cls, obj: dict) -> Profile:
        def dec(items):
            out = {}
            for j, v in items or []:
                j = int(j)
                if j in out:
                    raise ValueError(f"order {j} listed twice")
                out[j] = parse_fraction(str(v)) if not isinstance(v, (int, Fraction)) else Fraction(v)
            return out

        return cls(int(obj["n"]), dec(obj.get("b")), dec(obj.get("c")))


class ScalarLaplacian:
    def __init__(self, profile: Profile | int):
        self.profile = Profile.flat(profile) if isinstance(profile, int) else profile
        self.n = self.profile.n

    def apply(self, u: RhoSeries) -> RhoSeries:
        n, m = self.n, u.max_order
        prof = self.profile
        rd = u.rho_derivative()
        out = rd.rho_derivative().scale(GaussianRational(Fraction(-1, 4))) + rd.scale(GaussianRational(Fraction(n + 1, 2)))
        if not prof.is_flat():
            bs, cs = prof.series("b", m), prof.series("c", m)
            log_det = bs.log_derivative() + cs.log_derivative().scale(Fraction(2 * n))
            out = out - rd.mul_scalar_series(log_det).scale(GaussianRational(Fraction(1, 8)))
        lap = u.map(_delta_b)
        t2 = u.map(_reeb_sq)
        if prof.is_flat():
            spatial = lap.shift(2) - t2.shift(4)
        else:
            spatial = lap.mul_scalar_series(cs.reciprocal()).shift(2) - t2.mul_scalar_series(bs.reciprocal()).shift(4)
        return (out + spatial).truncate(m)


# -- the order-by-order stepper -------------------------------------------


def frobenius_solve(
    lap: ScalarLaplacian,
    lam,
    start: int,
    max_order: int,
    prescribed: dict[int, tuple[object, object]],
    rhs: RhoSeries | None = None,
    free: dict[int, object] | None = None,
) -> tuple[RhoSeries, RhoSeries]:
    """Solve ``(Delta - lam) u = rhs`` with ``u = sum rho^m (a_m + b_m log rho)``.

    At each order ``m`` the leading part contributes ``E(m) a + E'(m) b``
    to the smooth slot and ``E(m) b`` to the log slot, where
    ``E(m) = -m^2/4 + (n+1)m/2 - lam``. Prescribed orders are imposed and
    checked; at other roots of ``E`` the log coefficient absorbs the
    residual and the smooth slot takes its value from ``free`` (default 0).
    Returns ``(u, residual)``.
    """
    n = lap.n
    lam = Fraction(lam)
    free = free or {}
    rhs = rhs if rhs is not None else RhoSeries(max_order)
    smooth: dict[int, object] = {}
    log: dict[int, object] = {}

    def residual() -> RhoSeries:
        u = RhoSeries(max_order, smooth, log)
        return lap.apply(u) - u.scale(GaussianRational(lam)) - rhs.truncate(max_order)

    for m in range(start, max_order + 1):
        res = residual()
        r, s = res.coeff(m), res.log_coeff(m)
        e = Fraction(-m * m, 4) + Fraction((n + 1) * m, 2) - lam
        de = Fraction(-m, 2) + Fraction(n + 1, 2)
        if m in prescribed:
            a, b = prescribed[m]
            if a is not None:
                smooth[m] = a
            if b is not None:
                log[m] = b
            check = residual()
            if check.coeff(m) is not None or check.log_coeff(m) is not None:
                raise ArithmeticError(f"prescribed data at order {m} is inconsistent with the equation")
            continue
        if e:
            inv = GaussianRational(1 / e)
            b = None if s is None else -(s * inv)
            a = add_opt(r, None if b is None else b * GaussianRational(de))
            a = None if a is None else -(a * inv)
        else:
            if s is not None:
                raise ArithmeticError(f"log residual at indicial order {m} cannot be absorbed")
            b = None if r is None else -(r * GaussianRational(1 / de))
            a = free.get(m)
        if a is not None and a:
            smooth[m] = a
        if b is not None and b:
            log[m] = b
    return RhoSeries(max_order, smooth, log), residual()


# -- eigenfunction problem and GJMS operators -----------------------------


@dataclass
class EigenSolution:
    n: int
    k: int
    u: RhoSeries
    F: RhoSeries
    G: RhoSeries
    residual: RhoSeries

    def boundary_log_coefficient(self):
        """``G|_M``, or None when it vanishes."""
        return self.G.coeff(0) if self.G.max_order >= 0 else None


def solve_eigen(n: int, k: int, f, max_order: int | None = None, lap: ScalarLaplacian | None = None) -> EigenSolution:
    """``u = rho^(n+1-k) F + rho^(n+1+k) log(rho) G`` with ``F|_M = f`` and
    ``(Delta - ((n+1)^2 - k^2)/4) u = 0`` through ``rho^(n+1-k+max_order)``."""
    if not 1 <= k <= n + 1:
        raise ValueError(f"need 1 <= k <= n+1, got n={n}, k={k}")
    max_order = default_scalar_order(n) if max_order is None else max_order
    if max_order < 2 * k:
        raise ValueError("max_order must be at least 2k")
    lap = lap or ScalarLaplacian(n)
    m0 = n + 1 - k
    lam = Fraction((n + 1) ** 2 - k * k, 4)
    u, res = frobenius_solve(lap, lam, m0, m0 + max_order, {m0: (f, None)})
    F = RhoSeries(u.max_order, u.smooth).shift(-m0)
    G = RhoSeries(u.max_order, u.log).shift(-(m0 + 2 * k))
    return EigenSolution(n, k, u, F, G, res)


def extract_gjms(n: int, k: int) -> OpPoly:
    """The operator ``P`` with ``G|_M = c_k P f``, from an operator-valued run."""
    sol = solve_eigen(n, k, OpPoly.const(1), max_order=2 * k)
    g0 = sol.G.coeff(0)
    if g0 is None:
        return OpPoly()
    return g0.scale(c_k(k).inverse())


def q_transform(n: int, upsilon: HeisPoly) -> HeisPoly:
    """``P_(2n+2) upsilon``, the inhomogeneous part of the Q-curvature change."""
    return extract_gjms(n, n + 1).apply(upsilon)


# -- log problem and Q-curvature ------------------------------------------


@dataclass
class LogSolution:
    n: int
    U: RhoSeries
    A: RhoSeries
    B: RhoSeries
    residual: RhoSeries


def solve_log(lap: ScalarLaplacian, max_order: int | None = None, ambiguity=0) -> LogSolution:
    """``U = log(rho) + A + B rho^(2n+2) log(rho)`` with ``Delta U = (n+1)/2``,
    ``A|_M = 0`` and the smooth ``rho^(2n+2)`` slot set to ``ambiguity``."""
    n = lap.n
    max_order = default_scalar_order(n) if max_order is None else max_order
    if max_order < 2 * n + 2:
        raise ValueError("max_order must be at least 2n+2")
    top = 2 * n + 2
    rhs = RhoSeries(max_order, {0: GaussianRational(Fraction(n + 1, 2))})
    free = {top: as_gaussian(Fraction(ambiguity))} if ambiguity else {}
    U, res = frobenius_solve(lap, 0, 0, max_order, {0: (None, ONE)}, rhs=rhs, free=free)
    A = RhoSeries(max_order, U.smooth)
    B = RhoSeries(max_order, {j: b for j, b in U.log.items() if j > 0}).shift(-top)
    return LogSolution(n, U, A, B, res)


def _real(x) -> Fraction:
    x = ZERO if x is None else as_gaussian(x)
    if not x.is_real():
        raise ArithmeticError(f"expected a real number, got {x}")
    return x.re


def q_curvature(lap: ScalarLaplacian, ambiguity=0, max_order: int | None = None) -> Fraction:
    """``Q = (-1)^n n! (n+1)! B|_M``."""
    n = lap.n
    sol = solve_log(lap, max_order, ambiguity)
    return (-1) ** n * factorial(n) * factorial(n + 1) * _real(sol.B.coeff(0))


# -- volume expansion -----------------------------------------------------


@dataclass
class VolumeExpansion:
    """Coefficients of ``sum_j c_j eps^j + L log(1/eps) + O(1)`` per unit
    boundary volume."""

    n: int
    coeffs: dict[int, Fraction]
    L: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c": [[j, str(v)] for j, v in sorted(self.coeffs.items())],
            "L": str(self.L),
        }


def volume_coeffs(profile: Profile) -> VolumeExpansion:
    """Integrate the density ``2 rho^(-2n-3) sqrt(b) c^n`` from ``eps``."""
    n = profile.n
    top = 2 * n + 2
    w = profile.series("b", top).sqrt().mul_scalar_series(profile.series("c", top).power(n)).truncate(top)
    d = {i: _real(w.coeff(i)) for i in range(top + 1)}
    coeffs = {}
    for j in range(-top, 0):
        v = Fraction(-2, j) * d[j + top]
        if v:
            coeffs[j] = v
    return VolumeExpansion(n, coeffs, 2 * d[top])


def total_q_check(profile: Profile) -> Report:
    """``L = 2 (-1)^(n+1) / (n!^2 (n+1)!) * n! * Q`` per unit volume, with
    ``L`` from the volume integral and ``Q`` from the log problem."""
    n = profile.n
    rep = Report(f"total Q-curvature versus volume log term, n={n}")
    L = volume_coeffs(profile).L
    Q = q_curvature(ScalarLaplacian(profile))
    rhs = Fraction(2 * (-1) ** (n + 1), factorial(n) ** 2 * factorial(n + 1)) * factorial(n) * Q
    rep.add(f"L=Qbar-term profile={profile.to_json()}", "volume log term", L == rhs, f"L={L}, from Q: {rhs} (Q={Q})")
    return rep
