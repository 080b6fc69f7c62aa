"""Exact tensor calculus in the rescaled frame of the complex hyperbolic model.

The frame is ``Z_t = rho d_rho / 2 + i rho^2 T``, ``Z_a = rho Z_a``
(Heisenberg field) and their conjugates. Frame indices are integers::

    0            tau
    1..n         alpha
    n+1          taubar
    n+1+a        alphabar

The metric is ``g(t, bt) = 2`` and ``g(a, bb) = delta``. Structure
constants are derived from coordinate vector fields in ``(rho, z, zb, t)``
and the Levi-Civita connection from the Koszul formula, so nothing below
the bracket table is taken on trust.

Riemann convention: ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`` and
``R_PQRS = g(R(Z_R, Z_S) Z_P, Z_Q)``, which makes ``R(t, bt, t, bt) = -4``
and ``Ric_BD = g^AC R_BACD`` equal to ``-(n+2)/2 g``.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from functools import lru_cache

from .exact import I, ONE, ZERO, GaussianRational
from .heisenberg import HeisPoly, partial, reeb, z_field, zbar_field
from .report import Report
from .series import RhoSeries

__all__ = [
    "FrameTensor",
    "anti_hermitian_tensor",
    "christoffel_from_koszul",
    "christoffel_table",
    "check_christoffel",
    "conj_index",
    "covariant_derivative",
    "curvature",
    "curvature_constants",
    "divergence",
    "einstein_check",
    "frame_action",
    "frame_brackets",
    "hodge_apply",
    "index_name",
    "inverse_metric",
    "lichnerowicz_apply",
    "metric",
    "metric_tensor",
    "parse_index",
    "ricci",
    "ricci_constants",
    "scalar_curvature",
]

Key = tuple[int, ...]
HALF = GaussianRational(Fraction(1, 2))


# -- indices --------------------------------------------------------------


def dim(n: int) -> int:
    return 2 * n + 2


def tau(n: int) -> int:
    return 0


def taubar(n: int) -> int:
    return n + 1


def conj_index(i: int, n: int) -> int:
    return (i + n + 1) % (2 * n + 2)


def is_barred(i: int, n: int) -> bool:
    return i > n


def index_name(i: int, n: int) -> str:
    base = i - (n + 1) if i > n else i
    name = "t" if base == 0 else str(base)
    return "b" + name if i > n else name


def parse_index(text: str, n: int) -> int:
    barred = text.startswith("b")
    body = text[1:] if barred else text
    if body == "t":
        base = 0
    elif body.isdigit() and 1 <= int(body) <= n:
        base = int(body)
    else:
        raise ValueError(f"bad frame index {text!r} for n={n}")
    return base + (n + 1 if barred else 0)


def key_name(key: Key, n: int) -> str:
    return ",".join(index_name(i, n) for i in key)


# -- coordinate vector fields with rho ------------------------------------
#
# A coefficient is a dict rho-power -> HeisPoly. Slot -1 is d/drho; slots
# 0..2n are the Heisenberg coordinates in HeisPoly order.


def _rp_add(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        s = out[k] + v if k in out else v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _rp_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for i, a in x.items():
        for j, b in y.items():
            out = _rp_add(out, {i + j: a * b})
    return out


def _rp_apply(field: dict, f: dict) -> dict:
    """Apply a vector field (slot -> coefficient) to a function."""
    total: dict = {}
    for slot, coeff in field.items():
        if slot == -1:
            df = {k - 1: v.scale(k) for k, v in f.items() if k}
        else:
            df = {k: partial(v, slot) for k, v in f.items()}
            df = {k: v for k, v in df.items() if v}
        total = _rp_add(total, _rp_mul(coeff, df))
    return total


def _rp_bracket(x: dict, y: dict) -> dict:
    out = {}
    for slot in set(x) | set(y):
        v = _rp_add(_rp_apply(x, y.get(slot, {})), {k: -c for k, c in _rp_apply(y, x.get(slot, {})).items()})
        if v:
            out[slot] = v
    return out


def _coordinate_frame(n: int) -> list[dict]:
    one = HeisPoly.constant(n)
    ti = 2 * n
    fields: list[dict] = [None] * dim(n)  # type: ignore[list-item]
    for barred in (False, True):
        s = -1 if barred else 1
        fields[n + 1 if barred else 0] = {-1: {1: one.scale(HALF)}, ti: {2: one.scale(I * 2 * s)}}
        for a in range(1, n + 1):
            other = HeisPoly.z(n, a) if barred else HeisPoly.zb(n, a)
            diff = n + a - 1 if barred else a - 1
            fields[a + (n + 1 if barred else 0)] = {diff: {1: one}, ti: {1: other.scale(I * s)}}
    return fields


def _constant_part(f: dict, power: int, n: int, what: str) -> GaussianRational:
    if not f:
        return ZERO
    if set(f) != {power} or f[power].degree() != 0:
        raise ValueError(f"bracket {what} is not a constant combination of the frame")
    return f[power].constant_term()


def _decompose(v: dict, n: int, what: str) -> dict[int, GaussianRational]:
    """Write a coordinate vector field as a constant combination of the frame."""
    ti = 2 * n
    c: dict[int, GaussianRational] = {}
    for a in range(1, n + 1):
        c[a] = _constant_part(v.get(a - 1, {}), 1, n, what)
        c[n + 1 + a] = _constant_part(v.get(n + a - 1, {}), 1, n, what)
    plus = _constant_part(v.get(-1, {}), 1, n, what) * 2
    # t-component with the horizontal contributions removed
    rest = v.get(ti, {})
    for a in range(1, n + 1):
        rest = _rp_add(rest, {1: HeisPoly.zb(n, a).scale(-I * c[a])})
        rest = _rp_add(rest, {1: HeisPoly.z(n, a).scale(I * c[n + 1 + a])})
    minus = _constant_part(rest, 2, n, what) / (2 * I)
    c[0] = (plus + minus) * HALF
    c[n + 1] = (plus - minus) * HALF
    decomposed = {k: x for k, x in c.items() if x}
    # reassemble and compare, so a non-frame remainder cannot slip through
    fields = _coordinate_frame(n)
    back: dict = {}
    for k, x in decomposed.items():
        for slot, coeff in fields[k].items():
            back[slot] = _rp_add(back.get(slot, {}), {p: h.scale(x) for p, h in coeff.items()})
    back = {s: f for s, f in back.items() if f}
    if back != {s: f for s, f in v.items() if f}:
        raise ValueError(f"bracket {what} is not a constant combination of the frame")
    return decomposed


@lru_cache(maxsize=None)
def frame_brackets(n: int) -> dict[tuple[int, int], dict[int, GaussianRational]]:
    """Structure constants ``[Z_P, Z_Q] = sum_R C[P, Q][R] Z_R`` (nonzero only)."""
    fields = _coordinate_frame(n)
    table = {}
    for p, q in itertools.product(range(dim(n)), repeat=2):
        what = f"[{index_name(p, n)},{index_name(q, n)}]"
        c = _decompose(_rp_bracket(fields[p], fields[q]), n, what)
        if c:
            table[(p, q)] = c
    return table


# -- metric and connection ------------------------------------------------


@lru_cache(maxsize=None)
def metric(n: int) -> dict[tuple[int, int], GaussianRational]:
    g = {(0, n + 1): GaussianRational(2), (n + 1, 0): GaussianRational(2)}
    for a in range(1, n + 1):
        g[(a, n + 1 + a)] = g[(n + 1 + a, a)] = ONE
    return g


@lru_cache(maxsize=None)
def inverse_metric(n: int) -> dict[tuple[int, int], GaussianRational]:
    return {k: v.inverse() for k, v in metric(n).items()}


def _partner(i: int, n: int) -> int:
    """The unique index Q with g(i, Q) != 0."""
    return conj_index(i, n)


@lru_cache(maxsize=None)
def christoffel_from_koszul(n: int) -> dict[tuple[int, int, int], GaussianRational]:
    """``Gamma[R, P, Q]`` with ``nabla_{Z_P} Z_Q = Gamma^R_PQ Z_R``.

    The metric is constant, so only bracket terms of the Koszul formula
    survive.
    """
    brackets = frame_brackets(n)
    g = metric(n)

    def c_low(r, p, q):
        # g([Z_p, Z_q], Z_r)
        return sum((x * g.get((s, r), ZERO) for s, x in brackets.get((p, q), {}).items()), ZERO)

    table = {}
    N = dim(n)
    for r, p, q in itertools.product(range(N), repeat=3):
        low = (c_low(r, p, q) - c_low(q, p, r) - c_low(p, q, r)) * HALF
        if low:
            up = _partner(r, n)
            table[(up, p, q)] = inverse_metric(n)[(up, r)] * low
    return table


@lru_cache(maxsize=None)
def christoffel_table(n: int) -> dict[tuple[int, int, int], GaussianRational]:
    """The tabulated boundary values, completed by conjugation."""
    t, tb = 0, n + 1
    entries: dict[tuple[int, int, int], GaussianRational] = {
        (t, t, t): -ONE,
        (t, tb, t): ONE,
    }
    for b in range(1, n + 1):
        bb = n + 1 + b
        entries[(b, b, t)] = -ONE
        entries[(b, t, b)] = -HALF
        entries[(b, tb, b)] = HALF
        entries[(t, bb, b)] = HALF
    table = dict(entries)
    for (r, p, q), v in entries.items():
        table[(conj_index(r, n), conj_index(p, n), conj_index(q, n))] = v.conjugate()
    return table


def check_christoffel(n: int) -> Report:
    """Compare the Koszul computation with the tabulated values, per symbol."""
    rep = Report(f"Christoffel symbols, n={n}")
    derived = christoffel_from_koszul(n)
    table = christoffel_table(n)
    for key in itertools.product(range(dim(n)), repeat=3):
        a, b = derived.get(key, ZERO), table.get(key, ZERO)
        r, p, q = (index_name(i, n) for i in key)
        rep.add(f"Gamma^{r}_{p}{q}={b}", "Christoffel table", a == b, "" if a == b else f"Koszul gives {a}")
    return rep


# -- tensors --------------------------------------------------------------


class FrameTensor:
    """Covariant tensor with ``RhoSeries`` components indexed by frame tuples.

    Absent components are zero. Every component is known through
    ``max_order``.
    """

    __slots__ = ("n", "rank", "max_order", "comps")

    def __init__(self, n: int, rank: int, max_order: int, comps: Mapping[Key, RhoSeries] | None = None):
        self.n = n
        self.rank = rank
        self.max_order = max_order
        self.comps: dict[Key, RhoSeries] = {}
        for k, s in (comps or {}).items():
            k = tuple(k)
            if len(k) != rank or not all(0 <= i < dim(n) for i in k):
                raise IndexError(f"bad key {k} for rank {rank}, n={n}")
            s = s.truncate(max_order)
            if s.max_order < max_order:
                raise ValueError(f"component {k} known only through order {s.max_order}")
            if s:
                self.comps[k] = s

    def zero_series(self) -> RhoSeries:
        return RhoSeries(self.max_order)

    def __getitem__(self, key) -> RhoSeries:
        return self.comps.get(tuple(key), self.zero_series())

    def __bool__(self) -> bool:
        return bool(self.comps)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrameTensor)
            and (self.n, self.rank, self.max_order) == (other.n, other.rank, other.max_order)
            and self.comps == other.comps
        )

    def __add__(self, other: FrameTensor) -> FrameTensor:
        return self._combine(other, 1)

    def __sub__(self, other: FrameTensor) -> FrameTensor:
        return self._combine(other, -1)

    def _combine(self, other: FrameTensor, sign: int) -> FrameTensor:
        if (self.n, self.rank) != (other.n, other.rank):
            raise ValueError("tensor shapes differ")
        m = min(self.max_order, other.max_order)
        out = {k: s.truncate(m) for k, s in self.comps.items()}
        for k, s in other.comps.items():
            s = s if sign > 0 else -s
            out[k] = out[k] + s if k in out else s.truncate(m)
        return FrameTensor(self.n, self.rank, m, out)

    def scale(self, c) -> FrameTensor:
        return FrameTensor(self.n, self.rank, self.max_order, {k: s.scale(c) for k, s in self.comps.items()})

    def truncate(self, max_order: int) -> FrameTensor:
        return FrameTensor(self.n, self.rank, min(max_order, self.max_order), self.comps)

    def is_symmetric(self) -> bool:
        return all(self[tuple(k[i] for i in perm)] == s for k, s in self.comps.items() for perm in itertools.permutations(range(self.rank)))

    def components_matching(self, pred: Callable[[Key], bool]) -> dict[Key, RhoSeries]:
        return {k: s for k, s in self.comps.items() if pred(k)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "max_order": self.max_order,
            "components": {key_name(k, self.n): self.comps[k].to_json() for k in sorted(self.comps)},
        }

    def __repr__(self) -> str:
        names = ", ".join(key_name(k, self.n) for k in sorted(self.comps))
        return f"FrameTensor(n={self.n}, rank={self.rank}, max={self.max_order}, nonzero=[{names}])"


def constant_series(n: int, c, max_order: int) -> RhoSeries:
    return RhoSeries(max_order, {0: HeisPoly.constant(n, c)})


def metric_tensor(n: int, max_order: int) -> FrameTensor:
    return FrameTensor(n, 2, max_order, {k: constant_series(n, v, max_order) for k, v in metric(n).items()})


# -- frame action and covariant derivative --------------------------------


def frame_action(p: int, s: RhoSeries, n: int) -> RhoSeries:
    """Apply the frame field ``Z_p`` to a series with HeisPoly coefficients."""
    m = s.max_order
    if p in (0, n + 1):
        sign = I if p == 0 else -I
        return (s.rho_derivative().scale(HALF) + s.map(reeb).scale(sign).shift(2)).truncate(m)
    if p <= n:
        return s.map(lambda c: z_field(p, c)).shift(1).truncate(m)
    return s.map(lambda c: zbar_field(p - n - 1, c)).shift(1).truncate(m)


@lru_cache(maxsize=None)
def _christoffel_by_upper(n: int) -> dict[int, list[tuple[int, int, GaussianRational]]]:
    """R -> [(P, Q, Gamma^R_PQ)] for the nonzero symbols."""
    out: dict[int, list] = {}
    for (r, p, q), v in christoffel_from_koszul(n).items():
        out.setdefault(r, []).append((p, q, v))
    return out


def _accumulate(out: dict, key: Key, s: RhoSeries) -> None:
    if key in out:
        out[key] = out[key] + s
    else:
        out[key] = s


def covariant_derivative(t: FrameTensor, directions: Iterable[int] | None = None) -> FrameTensor:
    """``(nabla t)_{P Q1..Qk} = Z_P t_Q - sum_i Gamma^R_{P Qi} t_{..R..}``.

    The new slot comes first. ``directions`` restricts P (other components
    are then left out, not zero).
    """
    n = t.n
    dirs = list(range(dim(n))) if directions is None else list(directions)
    wanted = set(dirs)
    by_upper = _christoffel_by_upper(n)
    out: dict[Key, RhoSeries] = {}
    for key, s in t.comps.items():
        for p in dirs:
            ds = frame_action(p, s, n)
            if ds:
                _accumulate(out, (p,) + key, ds)
        for slot, r in enumerate(key):
            for p, q, gamma in by_upper.get(r, ()):
                if p in wanted:
                    new = key[:slot] + (q,) + key[slot + 1 :]
                    _accumulate(out, (p,) + new, s.scale(-gamma))
    return FrameTensor(n, t.rank + 1, t.max_order, out)


def contract(t: FrameTensor, i: int, j: int) -> FrameTensor:
    """Contract slots ``i < j`` with the inverse metric."""
    n = t.n
    ginv = inverse_metric(n)
    out: dict[Key, RhoSeries] = {}
    for key, s in t.comps.items():
        c = ginv.get((key[i], key[j]))
        if c is None:
            continue
        rest = tuple(x for k, x in enumerate(key) if k not in (i, j))
        _accumulate(out, rest, s.scale(c))
    return FrameTensor(n, t.rank - 2, t.max_order, out)


# -- curvature ------------------------------------------------------------


@lru_cache(maxsize=None)
def _riemann_endomorphism(n: int) -> dict[tuple[int, int, int, int], GaussianRational]:
    """``E[U, Q, R, S]``: the Z_U component of ``R(Z_R, Z_S) Z_Q``.

    The symbols are constant, so no derivative terms appear.
    """
    N = dim(n)
    gam = christoffel_from_koszul(n)
    brackets = frame_brackets(n)

    def G(r, p, q):
        return gam.get((r, p, q), ZERO)

    out = {}
    for u, q, r, s in itertools.product(range(N), repeat=4):
        v = ZERO
        for w in range(N):
            v = v + G(w, s, q) * G(u, r, w) - G(w, r, q) * G(u, s, w)
            c = brackets.get((r, s), {}).get(w)
            if c:
                v = v - c * G(u, w, q)
        if v:
            out[(u, q, r, s)] = v
    return out


@lru_cache(maxsize=None)
def curvature_constants(n: int) -> dict[Key, GaussianRational]:
    """``R_PQRS = g(R(Z_R, Z_S) Z_P, Z_Q)`` (nonzero entries)."""
    g = metric(n)
    out = {}
    for (u, p, r, s), v in _riemann_endomorphism(n).items():
        q = _partner(u, n)
        out[(p, q, r, s)] = out.get((p, q, r, s), ZERO) + g[(q, u)] * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def ricci_constants(n: int) -> dict[tuple[int, int], GaussianRational]:
    """``Ric_BD = g^AC R_BACD``."""
    ginv = inverse_metric(n)
    out: dict = {}
    for (b, a, c, d), v in curvature_constants(n).items():
        x = ginv.get((a, c))
        if x is not None:
            out[(b, d)] = out.get((b, d), ZERO) + x * v
    return {k: v for k, v in out.items() if v}


def curvature(n: int, max_order: int) -> FrameTensor:
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    return FrameTensor(n, 4, max_order, {k: constant_series(n, v, max_order) for k, v in curvature_constants(n).items()})


def ricci(n: int, max_order: int) -> FrameTensor:
    return FrameTensor(n, 2, max_order, {k: constant_series(n, v, max_order) for k, v in ricci_constants(n).items()})


def scalar_curvature(n: int) -> GaussianRational:
    ginv = inverse_metric(n)
    return sum((ginv[k] * v for k, v in ricci_constants(n).items() if k in ginv), ZERO)


def einstein_check(n: int, max_order: int = 4) -> Report:
    """Curvature identities of the model, checked through ``max_order``."""
    rep = Report(f"Einstein condition and curvature, n={n}")
    einstein = ricci(n, max_order) + metric_tensor(n, max_order).scale(GaussianRational(Fraction(n + 2, 2)))
    rep.add("Ric+(n+2)/2 g=0", "Einstein constant", not einstein, repr(einstein) if einstein else "")
    scal = scalar_curvature(n)
    rep.add(f"Scal={-(n + 1) * (n + 2)}", "scalar curvature", scal == -(n + 1) * (n + 2), f"got {scal}")
    R = curvature_constants(n)
    t, tb = 0, n + 1
    rep.add("R(t,bt,t,bt)=-4", "curvature boundary value", R.get((t, tb, t, tb), ZERO) == -4, f"got {R.get((t, tb, t, tb), ZERO)}")
    rep.add("R(1,b1,1,b1)=-1", "curvature boundary value", R.get((1, n + 2, 1, n + 2), ZERO) == -1, f"got {R.get((1, n + 2, 1, n + 2), ZERO)}")
    N = dim(n)
    keys = list(itertools.product(range(N), repeat=4))
    get = lambda k: R.get(k, ZERO)  # noqa: E731
    rep.add("pair symmetry", "R_PQRS=R_RSPQ", all(get((p, q, r, s)) == get((r, s, p, q)) for p, q, r, s in keys))
    rep.add(
        "first Bianchi",
        "R_[PQR]S=0",
        all(not (get((p, q, r, s)) + get((q, r, p, s)) + get((r, p, q, s))) for p, q, r, s in keys),
    )
    bad = [k for k, v in R.items() if sum(is_barred(i, n) for i in k) != 2 or is_barred(k[0], n) == is_barred(k[1], n) or is_barred(k[2], n) == is_barred(k[3], n)]
    rep.add("Kahler type", "only R_{A Bb C Db} survive", not bad, ", ".join(key_name(k, n) for k in bad[:5]))
    kahler = all(
        get((a, b, c, d)) == -HALF * (metric(n).get((a, b), ZERO) * metric(n).get((c, d), ZERO) + metric(n).get((a, d), ZERO) * metric(n).get((c, b), ZERO))
        for a, b, c, d in keys
        if not is_barred(a, n) and is_barred(b, n) and not is_barred(c, n) and is_barred(d, n)
    )
    rep.add("constant holomorphic sectional curvature", "R_ABbCDb=-1/2(g g + g g)", kahler)
    metricity = covariant_derivative(metric_tensor(n, max_order))
    rep.add("nabla g=0", "metricity", not metricity)
    return rep


# -- Laplace-type operators -----------------------------------------------


def divergence(sigma: FrameTensor) -> FrameTensor:
    """``(delta sigma)_Q = -g^PR (nabla sigma)_{R P Q}``."""
    return contract(covariant_derivative(sigma), 0, 1).scale(-ONE)


def rough_laplacian(t: FrameTensor) -> FrameTensor:
    """``nabla* nabla t = -g^PQ (nabla nabla t)_{PQ...}``."""
    return contract(covariant_derivative(covariant_derivative(t)), 0, 1).scale(-ONE)


def _ricci_action(t: FrameTensor, slot: int) -> FrameTensor:
    """``Ric_{A_slot}^C t_{..C..}``."""
    n = t.n
    ginv = inverse_metric(n)
    ric = ricci_constants(n)
    out: dict[Key, RhoSeries] = {}
    for key, s in t.comps.items():
        c = key[slot]
        for (a, d), r in ric.items():
            x = ginv.get((d, c))
            if x is not None:
                _accumulate(out, key[:slot] + (a,) + key[slot + 1 :], s.scale(r * x))
    return FrameTensor(n, t.rank, t.max_order, out)


def _curvature_action(sigma: FrameTensor) -> FrameTensor:
    """``R_A^C_B^D sigma_CD = g^CE g^DF R_AEBF sigma_CD``."""
    n = sigma.n
    ginv = inverse_metric(n)
    R = curvature_constants(n)
    by_pair: dict[tuple[int, int], list] = {}
    for (a, e, b, f), v in R.items():
        by_pair.setdefault((e, f), []).append((a, b, v))
    out: dict[Key, RhoSeries] = {}
    for (c, d), s in sigma.comps.items():
        e, f = _partner(c, n), _partner(d, n)
        w = ginv[(c, e)] * ginv[(d, f)]
        for a, b, v in by_pair.get((e, f), ()):
            _accumulate(out, (a, b), s.scale(w * v))
    return FrameTensor(n, 2, sigma.max_order, out)


def lichnerowicz_apply(sigma: FrameTensor) -> FrameTensor:
    """``(Delta_L + n + 2) sigma`` for a symmetric 2-tensor:
    ``nabla* nabla sigma + 2 Ric_(A^C sigma_B)C + 2 R_A^C_B^D sigma_CD + (n+2) sigma``.
    """
    if sigma.rank != 2:
        raise ValueError("expected a 2-tensor")
    n = sigma.n
    ric = _ricci_action(sigma, 0) + _ricci_action(sigma, 1)
    return rough_laplacian(sigma) + ric + _curvature_action(sigma).scale(GaussianRational(2)) + sigma.scale(GaussianRational(n + 2))


def hodge_apply(mu: FrameTensor) -> FrameTensor:
    """``(Delta_H + n + 2) mu = nabla* nabla mu + Ric(mu) + (n+2) mu`` on 1-forms."""
    if mu.rank != 1:
        raise ValueError("expected a 1-form")
    return rough_laplacian(mu) + _ricci_action(mu, 0) + mu.scale(GaussianRational(mu.n + 2))


# -- assembling tensors from channel data ---------------------------------


def _component(series: RhoSeries, key: Key) -> RhoSeries:
    return series.map(lambda tp: tp[key])


def anti_hermitian_tensor(n: int, max_order: int, tt: RhoSeries | None = None, ta: RhoSeries | None = None, ab: RhoSeries | None = None) -> FrameTensor:
    """Symmetric 2-tensor whose only components are ``(t,t)``, ``(t,a)`` and
    ``(a,b)``. ``tt`` has HeisPoly coefficients; ``ta`` and ``ab`` have
    vector and sym2 TensorPoly coefficients."""
    comps: dict[Key, RhoSeries] = {}
    if tt is not None:
        comps[(0, 0)] = tt
    if ta is not None:
        for a in range(1, n + 1):
            s = _component(ta, (a,))
            comps[(0, a)] = comps[(a, 0)] = s
    if ab is not None:
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                comps[(a, b)] = _component(ab, (a, b))
    return FrameTensor(n, 2, max_order, comps)
