"""Independent sympy computations for spatially constant profiles.

The Laplacian is taken in divergence form, ``-(1/V) d/drho (V rho^2/4 du/drho)``
with volume density ``V = rho^(-2n-3) sqrt(b) c^n``, and ``log(rho)`` is
carried as a separate symbol.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

rho, lg = sp.symbols("rho lg", positive=True)


def _poly(coeffs: dict[int, Fraction]):
    return sum(sp.Rational(v.numerator, v.denominator) * rho**j for j, v in coeffs.items())


def _d(f):
    return sp.diff(f, rho) + sp.diff(f, lg) / rho


def log_problem_B(n: int, b: dict[int, Fraction], c: dict[int, Fraction], extra: int = 2) -> Fraction:
    """Coefficient of ``rho^(2n+2) log(rho)`` in the solution of
    ``Delta U = (n+1)/2`` with ``U = log(rho) + O(rho)``."""
    top = 2 * n + 2
    N = top + extra
    bb, cc = _poly({0: Fraction(1), **b}), _poly({0: Fraction(1), **c})
    dlogV = (-2 * n - 3) / rho + sp.diff(bb, rho) / (2 * bb) + n * sp.diff(cc, rho) / cc
    dlogV_series = sp.series(dlogV, rho, 0, N + 1).removeO()
    a = sp.symbols(f"a1:{N + 1}")
    bl = sp.symbols(f"b{top}:{N + 1}")
    U = lg + sum(a[j - 1] * rho**j for j in range(1, N + 1) if j != top) + sum(bl[j - top] * rho**j * lg for j in range(top, N + 1))
    du = _d(U)
    lap = -sp.Rational(1, 4) * (rho**2 * _d(du) + (2 * rho + rho**2 * dlogV_series) * du)
    expr = sp.expand(lap - sp.Rational(n + 1, 2))
    eqs = []
    for j in range(0, N + 1):
        for k in (0, 1):
            eqs.append(expr.coeff(lg, k).coeff(rho, j))
    sol = sp.solve(eqs, list(a) + list(bl), dict=True)
    val = sp.Rational(sol[0][bl[0]])
    return Fraction(int(val.p), int(val.q))


def volume_log_term(n: int, b: dict[int, Fraction], c: dict[int, Fraction]) -> Fraction:
    """Coefficient of ``log(1/eps)`` in the integral of ``2 rho^(-2n-3) sqrt(b) c^n`` from eps."""
    top = 2 * n + 2
    w = sp.sqrt(_poly({0: Fraction(1), **b})) * _poly({0: Fraction(1), **c}) ** n
    coeff = sp.series(w, rho, 0, top + 1).removeO().coeff(rho, top)
    val = sp.Rational(2 * coeff)
    return Fraction(int(val.p), int(val.q))


# -- Heisenberg fields by direct differentiation ---------------------------


def heis_symbols(n: int):
    z = sp.symbols(f"z1:{n + 1}")
    zb = sp.symbols(f"zb1:{n + 1}")
    return z, zb, sp.Symbol("t")


def gaussian_to_sympy(c) -> sp.Expr:
    return sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)


def heis_to_sympy(p) -> sp.Expr:
    """Polynomial with exponent layout ``(z1..zn, zb1..zbn, t)``."""
    z, zb, t = heis_symbols(p.n)
    gens = (*z, *zb, t)
    return sp.expand(sum((gaussian_to_sympy(c) * sp.Mul(*(g**e for g, e in zip(gens, exps))) for exps, c in p.sorted_terms()), sp.Integer(0)))


def field_z(expr, n: int, a: int):
    z, zb, t = heis_symbols(n)
    return sp.expand(sp.diff(expr, z[a - 1]) + sp.I * zb[a - 1] * sp.diff(expr, t))


def field_zb(expr, n: int, a: int):
    z, zb, t = heis_symbols(n)
    return sp.expand(sp.diff(expr, zb[a - 1]) - sp.I * z[a - 1] * sp.diff(expr, t))


def field_t(expr, n: int):
    return sp.expand(2 * sp.diff(expr, heis_symbols(n)[2]))


def sublaplacian(expr, n: int):
    total = sp.Integer(0)
    for a in range(1, n + 1):
        total += field_z(field_zb(expr, n, a), n, a) + field_zb(field_z(expr, n, a), n, a)
    return sp.expand(-total)


def eigen_residual(sol) -> sp.Expr:
    """Flat-profile ``(Delta - lam) u`` with ``u = rho^(n+1-k) F + rho^(n+1+k) log(rho) G``,
    differentiated directly in ``rho`` and the Heisenberg coordinates."""
    n, k = sol.n, sol.k
    m0 = n + 1 - k
    F = sum((heis_to_sympy(c) * rho**j for j, c, _ in sol.F.terms() if c is not None), sp.Integer(0))
    G = sum((heis_to_sympy(c) * rho**j for j, c, _ in sol.G.terms() if c is not None), sp.Integer(0))
    u = rho**m0 * F + rho ** (m0 + 2 * k) * lg * G
    rd = lambda f: rho * _d(f)  # noqa: E731
    lam = sp.Rational((n + 1) ** 2 - k * k, 4)
    lap = -sp.Rational(1, 4) * rd(rd(u)) + sp.Rational(n + 1, 2) * rd(u) + rho**2 * sublaplacian(u, n) - rho**4 * field_t(field_t(u, n), n)
    return sp.expand(lap - lam * u)


def rho_valuation(expr) -> int | None:
    """Lowest power of ``rho`` in a polynomial in ``rho`` and ``lg``; None for zero."""
    expr = sp.expand(expr)
    if expr == 0:
        return None
    return min(sp.Poly(term, rho).monoms()[0][0] for term in sp.Add.make_args(expr))
