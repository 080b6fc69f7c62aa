"""Named verification suites producing :class:`Report` objects."""

from __future__ import annotations

import random
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import factorial

from .exact import GaussianRational
from .frame import (
    FrameTensor,
    check_christoffel,
    einstein_check,
    frame_brackets,
    hodge_apply,
    lichnerowicz_apply,
)
from .heisenberg import HeisPoly, check_frame_relations, parse_expression, random_heis_poly, random_tensor_poly
from .lichnerowicz import (
    check_complex_property,
    cross_validate,
    extract_obstruction,
    gauge_report,
    indicial_polynomial,
    solve_lichnerowicz,
)
from .opalgebra import c_k, gjms_product, qpoly, verify_rules
from .report import Report
from .scalar import Profile, ScalarLaplacian, extract_gjms, q_curvature, solve_eigen, total_q_check, volume_coeffs
from .series import RhoSeries

SUITES = ("arith", "frame", "gjms", "curvature", "lichnerowicz", "volume")


def _rand_gr(rng: random.Random) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(-30, 30), rng.randint(1, 12)), Fraction(rng.randint(-30, 30), rng.randint(1, 12)))


def arith_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"arith n={n}")
    rng = random.Random(seed)
    ok = True
    for _ in range(50):
        a, b, c = _rand_gr(rng), _rand_gr(rng), _rand_gr(rng)
        ok &= (a + b) * c == a * c + b * c and (a * b) * c == a * (b * c)
        ok &= a == GaussianRational.parse(a.render()) == GaussianRational.from_json(a.to_json())
        if b:
            ok &= (a / b) * b == a
    rep.add("Gaussian rational field laws", "exact arithmetic", ok)
    for k in range(1, 13):
        rep.add(f"q_{k} recurrence=product", "q-polynomial identity", qpoly(k, "recurrence") == qpoly(k, "closed_form"))
    for k in range(1, 7):
        expected = GaussianRational(Fraction(2 * (-1) ** (k + 1), factorial(k) * factorial(k - 1)))
        rep.add(f"c_{k}={expected}", "normalizing constant", c_k(k) == expected)
    polys = [random_heis_poly(n, rng, max_weight=6, terms=5) for _ in range(5)]
    rep.add("polynomial render/parse round-trip", "expression syntax", all(parse_expression(p.render(), n) == p for p in polys))
    rep.add("polynomial JSON round-trip", "serialization", all(HeisPoly.from_json(p.to_json()) == p for p in polys))
    rep.extend(verify_rules(n, trials=3, seed=seed))
    return rep


def _indicial_checks(n: int) -> Report:
    """Leading factors of the Laplace-type operators on ``rho^j`` data,
    computed from the connection and compared with the tabulated polynomials."""
    rep = Report(f"indicial factors n={n}")
    t, tb = 0, n + 1
    M = 2 * n + 6
    one = lambda j: RhoSeries(M, {j: HeisPoly.constant(n)})  # noqa: E731
    cases = [
        ("tt", 2, {(t, t): None}),
        ("ta", 2, {(t, 1): None, (1, t): None}),
        ("ab", 2, {(1, 1): None}),
        ("trace", 2, {(t, tb): None, (tb, t): None}),
        ("form_t", 1, {(t,): None}),
        ("form_a", 1, {(1,): None}),
    ]
    if n >= 2:
        cases.append(("tf", 2, {(1, n + 3): None, (n + 3, 1): None}))
    for channel, rank, keys in cases:
        poly = indicial_polynomial(channel, n)
        ok = True
        for j in range(0, 2 * n + 5):
            data = FrameTensor(n, rank, M, {k: one(j) for k in keys})
            out = lichnerowicz_apply(data) if rank == 2 else hodge_apply(data)
            key = next(iter(keys))
            ok &= out[key] == one(j).scale(GaussianRational(poly(j))) and set(out.comps) <= set(keys)
        rep.add(f"indicial {channel}: {poly.text()}", "leading-order factor", ok)
    return rep


def frame_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"frame n={n}")
    rep.extend(check_frame_relations(n))
    br = frame_brackets(n)
    t, tb = 0, n + 1
    half = GaussianRational(Fraction(1, 2))
    rep.add("[Z_t,Z_1]=1/2 Z_1", "frame brackets", br.get((t, 1)) == {1: half})
    rep.add("[Z_1,Z_b1]=-1/2(Z_t-Z_bt)", "frame brackets", br.get((1, n + 2)) == {t: -half, tb: half})
    rep.add("[Z_t,Z_bt]=-(Z_t-Z_bt)", "frame brackets", br.get((t, tb)) == {t: -GaussianRational(1), tb: GaussianRational(1)})
    rep.add("[Z_a,Z_b]=0", "frame brackets", all((a, b) not in br for a in range(1, n + 1) for b in range(1, n + 1)))
    rep.extend(check_christoffel(n))
    rep.extend(_indicial_checks(n))
    return rep


def curvature_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"curvature n={n}")
    rep.extend(einstein_check(n))
    return rep


def gjms_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"gjms n={n}")
    rng = random.Random(seed)
    for k in range(1, n + 2):
        P = extract_gjms(n, k)
        rep.add(f"P_{2 * k} n={n} = product", "GJMS product formula", P == gjms_product(n, k), P.text())
        rep.add(f"P_{2 * k} n={n} self-adjoint", "formal self-adjointness", P.adjoint() == P)
        ones = solve_eigen(n, k, HeisPoly.constant(n))
        rep.add(f"k={k} f=1: F=1, G=0", "constant boundary data", ones.F == RhoSeries(ones.F.max_order, {0: HeisPoly.constant(n)}) and not ones.G)
        for i in range(3):
            f = random_heis_poly(n, rng, max_weight=2 * k + 2, terms=3)
            sol = solve_eigen(n, k, f, max_order=2 * k + 4)
            rep.add(f"k={k} eigen residual sample {i}", "residual vanishing", not sol.residual, str(sol.residual.orders()))
            rep.add(f"k={k} odd coefficients vanish sample {i}", "parity of the expansion", all(j % 2 == 0 for j in sol.F.orders()))
            g0 = sol.G.coeff(0) or HeisPoly.zero(n)
            rep.add(f"k={k} G|_M=c_k P f sample {i}", "log coefficient", g0 == gjms_product(n, k).apply(f).scale(c_k(k)))
    top = extract_gjms(n, n + 1)
    rep.add(f"P_{2 * n + 2} 1 = 0", "constants annihilated", not top.apply(HeisPoly.constant(n)))
    return rep


def lichnerowicz_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"lichnerowicz n={n}")
    if n < 2:
        return rep
    result = extract_obstruction(n)
    rep.extend(result.report)
    rep.extend(gauge_report(n))
    rep.extend(check_complex_property(n, trials=5, seed=seed))
    if n == 2:
        rng = random.Random(seed)
        state = solve_lichnerowicz(n)
        for i in range(5):
            psi = random_tensor_poly(n, "sym2", rng, max_weight=2 * n + 4, terms=3)
            sub = cross_validate(state, psi)
            for c in sub.checks:
                rep.add(f"{c.id} sample {i}", c.anchor, c.passed, c.detail)
    return rep


def _random_profile(n: int, rng: random.Random) -> Profile:
    def part():
        orders = rng.sample(range(1, 2 * n + 3), rng.randint(1, 3))
        return {j: Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 7)) for j in orders}

    return Profile(n, part(), part())


def volume_suite(n: int, seed: int = 0) -> Report:
    rep = Report(f"volume n={n}")
    rng = random.Random(seed)
    rep.extend(total_q_check(Profile.flat(n)))
    a = Fraction(3, 5)
    worked = Profile(n, b={2 * n + 2: a})
    rep.add(f"L=a for b=1+a rho^{2 * n + 2}", "volume log term", volume_coeffs(worked).L == a)
    rep.extend(total_q_check(worked))
    for _ in range(3):
        rep.extend(total_q_check(_random_profile(n, rng)))
    lap = ScalarLaplacian(_random_profile(n, rng))
    qs = {q_curvature(lap, ambiguity=x) for x in (0, 1, Fraction(-7, 3))}
    rep.add("Q independent of the ambiguity slot", "log problem ambiguity", len(qs) == 1, str(sorted(qs)))
    return rep


SUITE_FUNCS: dict[str, Callable[[int, int], Report]] = {
    "arith": arith_suite,
    "frame": frame_suite,
    "gjms": gjms_suite,
    "curvature": curvature_suite,
    "lichnerowicz": lichnerowicz_suite,
    "volume": volume_suite,
}


def _run_one(job: tuple[str, int, int]) -> tuple[Report, float]:
    name, n, seed = job
    t0 = time.perf_counter()
    rep = SUITE_FUNCS[name](n, seed)
    return rep, time.perf_counter() - t0


def run_suites(suite: str, ns: list[int], seed: int = 0, jobs: int = 1) -> tuple[list[Report], dict[str, float]]:
    """Run the named suite (or ``all``) for every ``n``; results come back in
    a fixed order regardless of ``jobs``."""
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
    work = [(name, n, seed) for name in names for n in ns]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    reports = [r for r, _ in results]
    timing = {r.title: round(t, 6) for r, t in results}
    return reports, timing


__all__ = ["SUITES", "run_suites", *[f"{s}_suite" for s in SUITES]]
