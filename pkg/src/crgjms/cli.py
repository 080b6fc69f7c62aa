"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from .exact import GaussianRational, parse_fraction
from .frame import curvature
from .heisenberg import ExpressionSyntaxError, HeisPoly, parse_expression
from .lichnerowicz import shape_diff, extract_obstruction
from .opalgebra import c_k, gjms_product, obstruction_closed_form
from .scalar import Profile, ScalarLaplacian, default_scalar_order, extract_gjms, q_curvature, q_transform, solve_eigen, solve_log, total_q_check, volume_coeffs
from .verify import SUITES, run_suites


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _series_text(series, render) -> str:
    parts = []
    for j, a, b in series.terms():
        if a is not None:
            parts.append(f"rho^{j}: {render(a)}")
        if b is not None:
            parts.append(f"rho^{j} log(rho): {render(b)}")
    return "\n".join(parts) if parts else "0"


def _poly_json(p):
    return p.to_json()


def _fraction_arg(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except ZeroDivisionError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad n range {text!r}; use N or LO..HI") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad n range {text!r}")
    return list(range(lo, hi + 1))


def _load_profile(path: str) -> Profile:
    try:
        obj = json.loads(Path(path).read_text())
        return Profile.from_json(obj)
    except OSError as e:
        raise UsageError(f"cannot read profile: {e}") from None
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"bad profile file: {e}") from None


def _parse_boundary(text: str, n: int) -> HeisPoly:
    try:
        return parse_expression(text, n)
    except ExpressionSyntaxError as e:
        raise UsageError(str(e)) from None
    except (ValueError, IndexError) as e:
        raise UsageError(str(e)) from None


# -- subcommands ----------------------------------------------------------


def cmd_gjms(args) -> str:
    n, k = args.n, args.k
    if n < 1 or not 1 <= k <= n + 1:
        raise UsageError(f"need n >= 1 and 1 <= k <= n+1, got n={n}, k={k}")
    op = extract_gjms(n, k)
    if op != gjms_product(n, k):
        raise VerificationFailure(f"recursion gives {op.text()}, product formula gives {gjms_product(n, k).text()}")
    if args.format == "json":
        return _dump({"n": n, "k": k, "operator": op.to_json(n)})
    if args.format == "latex":
        return (op.factored_latex() if args.factored else op.latex()) + "\n"
    return op.text() + "\n"


def cmd_obstruction(args) -> str:
    n = args.n
    if n < 2:
        raise UsageError("the obstruction operator needs dimension 2n+1 >= 5 (n >= 2)")
    result = extract_obstruction(n)
    if not result.passed:
        detail = "; ".join(f"{c.id}: {c.detail}" for c in result.report.failures())
        raise VerificationFailure(detail or shape_diff(result.obstruction, obstruction_closed_form(n)))
    op = result.obstruction
    if args.format == "json":
        return _dump(op.to_json())
    if args.format == "latex":
        return op.latex(factored=args.factored) + "\n"
    return op.text() + "\n"


def cmd_dirichlet(args) -> str:
    n, k = args.n, args.k
    if n < 1 or not 1 <= k <= n + 1:
        raise UsageError(f"need n >= 1 and 1 <= k <= n+1, got n={n}, k={k}")
    f = _parse_boundary(args.boundary, n)
    max_order = args.max_order if args.max_order is not None else default_scalar_order(n)
    if max_order < 2 * k:
        raise UsageError("--max-order must be at least 2k")
    sol = solve_eigen(n, k, f, max_order=max_order)
    g0 = sol.G.coeff(0) or HeisPoly.zero(n)
    expected = gjms_product(n, k).apply(f).scale(c_k(k))
    payload = {
        "n": n,
        "k": k,
        "boundary": f.render(),
        "F": sol.F.to_json(_poly_json),
        "G": sol.G.to_json(_poly_json),
        "G_boundary": g0.render(),
        "ck_P_f": expected.render(),
        "residual_zero": not sol.residual,
    }
    if g0 != expected or sol.residual:
        raise VerificationFailure(f"G|_M = {g0.render()} but c_k P f = {expected.render()}", payload)
    if args.format == "json":
        return _dump(payload)
    if args.format == "latex":
        return f"G|_M = {g0.render()}\n"
    return (
        f"F:\n{_series_text(sol.F, lambda p: p.render())}\n"
        f"G:\n{_series_text(sol.G, lambda p: p.render())}\n"
        f"G|_M = {g0.render()}\n"
        f"c_k P f = {expected.render()}\n"
    )


def cmd_logq(args) -> str:
    profile = _load_profile(args.profile)
    lap = ScalarLaplacian(profile)
    sol = solve_log(lap, args.max_order, args.ambiguity)
    Q = q_curvature(lap, args.ambiguity, args.max_order)
    b0 = sol.B.coeff(0) or GaussianRational(0)
    payload = {
        "profile": profile.to_json(),
        "A": sol.A.to_json(),
        "B": sol.B.to_json(),
        "B_boundary": b0.render(),
        "Q": str(Q),
        "residual_zero": not sol.residual,
    }
    if sol.residual:
        raise VerificationFailure("log problem residual does not vanish", payload)
    if args.format == "json":
        return _dump(payload)
    return f"B|_M = {b0.render()}\nQ = {Q}\n"


def cmd_volume(args) -> str:
    profile = _load_profile(args.profile)
    vol = volume_coeffs(profile)
    rep = total_q_check(profile)
    payload = {"volume": vol.to_json(), "check": rep.to_json()}
    if not rep.passed:
        raise VerificationFailure(rep.checks[0].detail, payload)
    if args.format == "json":
        return _dump(payload)
    lines = [f"c_{j} = {v}" for j, v in sorted(vol.coeffs.items())] + [f"L = {vol.L}", rep.checks[0].detail]
    return "\n".join(lines) + "\n"


def cmd_qtransform(args) -> str:
    n = args.n
    if n < 1:
        raise UsageError("n must be positive")
    ups = _parse_boundary(args.upsilon, n)
    out = q_transform(n, ups)
    if args.format == "json":
        return _dump({"n": n, "upsilon": ups.render(), "P_upsilon": out.to_json()})
    return out.render() + "\n"


def cmd_dump_curvature(args) -> str:
    if args.n < 1:
        raise UsageError("n must be positive")
    max_order = args.max_order if args.max_order is not None else 0
    if max_order < 0:
        raise UsageError("--max-order must be nonnegative")
    return _dump(curvature(args.n, max_order).to_json())


def cmd_verify(args):
    ns = _parse_range(args.n)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    reports, timing = run_suites(args.suite, ns, seed=args.seed, jobs=args.jobs)
    body = {
        "suite": args.suite,
        "n": ns,
        "seed": args.seed,
        "passed": all(r.passed for r in reports),
        "records": [dict(c.to_json(), group=r.title) for r in reports for c in r.checks],
    }
    digest = hashlib.sha256(canonical_json(body).encode()).hexdigest()
    out = {"canonical": body, "canonical_sha256": digest, "timing_seconds": timing}
    text = _dump(out) if args.format == "json" else _verify_text(body, digest)
    if not body["passed"]:
        raise VerificationFailure(f"{sum(r['status'] == 'fail' for r in body['records'])} check(s) failed", text)
    return text


def _verify_text(body: dict, digest: str) -> str:
    lines = [f"{r['status'].upper():4} {r['group']}: {r['id']}" + (f" ({r['detail']})" if r["status"] == "fail" and r["detail"] else "") for r in body["records"]]
    fails = sum(r["status"] == "fail" for r in body["records"])
    lines.append(f"{len(body['records'])} checks, {fails} failed, sha256 {digest}")
    return "\n".join(lines) + "\n"


# -- argument parsing -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crgjms", description="Exact CR GJMS operators, Q-curvature and obstruction computations on the Heisenberg model.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "latex", "text"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--max-order", type=int, dest="max_order")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gjms", parents=[common], help="emit the GJMS operator P_2k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--factored", action="store_true", help="LaTeX in product form")
    p.set_defaults(func=cmd_gjms)

    p = sub.add_parser("obstruction", parents=[common], help="emit the linearized obstruction operator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--factored", action="store_true", help="LaTeX coefficients in product form")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("dirichlet", parents=[common], help="solve the eigenfunction problem for boundary data")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--boundary", required=True, help='polynomial such as "z1*zb1 + 2*t"')
    p.set_defaults(func=cmd_dirichlet)

    p = sub.add_parser("logq", parents=[common], help="log expansion and Q-curvature for a profile file")
    p.add_argument("--profile", required=True)
    p.add_argument("--ambiguity", type=_fraction_arg, default=0, help="value of the free smooth slot, e.g. 3/2")
    p.set_defaults(func=cmd_logq)

    p = sub.add_parser("volume", parents=[common], help="volume expansion and total Q check for a profile file")
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("qtransform", parents=[common], help="P_(2n+2) applied to a conformal factor")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--upsilon", required=True)
    p.set_defaults(func=cmd_qtransform)

    p = sub.add_parser("dump-curvature", parents=[common], help="Riemann tensor of the model as JSON")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_dump_curvature)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--n", default="1..3", help="N or LO..HI")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text = args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except VerificationFailure as e:
        payload = e.payload
        if payload is not None:
            _emit(payload if isinstance(payload, str) else _dump(payload), args.out)
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
