"""The lattice lift f(w) = A w - w_j of a beta-transformation, and orbit certificates.

Points of Q(beta) are coefficient vectors, so the lift acts on the same data as
the map itself; the difference is that ``step`` uses the integer companion
matrix while ``betamap.eval_map`` multiplies in the field.

Trapping and escape regions are expressed through the conjugate embeddings
psi_i(w) = sum_k w_k beta_i**k.  psi_i kills the beta-eigenvector and
satisfies psi_i(A w) = beta_i psi_i(w), so |psi_i| plays the role of the
eigen-coordinate |c_i| up to the fixed factor |psi_i(v_i)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence, Union

from .betamap import BetaTransform, OutOfDomain
from .field import AlgebraicNumber, NumberField, conjugate_modulus, is_pisot

Vector = tuple  # tuple[Fraction, ...]

DEFAULT_BUDGET = 10**6


class NotPisot(ValueError):
    pass


class NotExpanding(ValueError):
    pass


@dataclass(frozen=True)
class LiftedMap:
    base: BetaTransform
    field: NumberField
    w_vectors: tuple[Vector, ...]
    q: int

    def value(self, w: Sequence) -> AlgebraicNumber:
        return AlgebraicNumber(self.field, w)

    def boundary_vectors(self) -> list[Vector]:
        """phi^{-1}(x_j) for every breakpoint; the W_j regions are bounded by V_0 + these."""
        return [x.coeffs for x in self.base.breakpoints]


@dataclass(frozen=True)
class Bound:
    """A threshold on |psi_i|.

    ``exact`` (real conjugates only) is an element u with threshold psi_i(u);
    ``rational`` is a certified rational upper bound (equal when exact is rational).
    """

    index: int
    rational: Fraction
    exact: AlgebraicNumber | None = None
    label: str = "minimal"

    @property
    def test_value(self) -> Union[Fraction, AlgebraicNumber]:
        return self.exact if self.exact is not None else self.rational

    def __float__(self) -> float:
        return float(self.rational)


@dataclass(frozen=True)
class EventuallyPeriodic:
    preperiod: int
    period: int
    prefix: tuple[Vector, ...]  # w_0 .. w_{K+L-1}; w_{K+L} == w_K

    status = "eventually_periodic"


@dataclass(frozen=True)
class ProvablyInfinite:
    escape_iterate: int
    conjugate: int
    threshold: Bound
    prefix: tuple[Vector, ...]  # w_0 .. w_{escape_iterate}

    status = "provably_infinite"


@dataclass(frozen=True)
class Undetermined:
    iterations: int
    prefix: tuple[Vector, ...] = dc_field(default=(), repr=False)

    status = "undetermined"


OrbitOutcome = Union[EventuallyPeriodic, ProvablyInfinite, Undetermined]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _den(w: Sequence[Fraction]) -> int:
    q = 1
    for c in w:
        q = _lcm(q, Fraction(c).denominator)
    return q


def lift_map(t: BetaTransform) -> LiftedMap:
    ws = tuple(y.coeffs for y in t.translates)
    q = 1
    for w in ws:
        q = _lcm(q, _den(w))
    for x in t.breakpoints:
        q = _lcm(q, _den(x.coeffs))
    return LiftedMap(t, t.field, ws, q)


def _vec(m: LiftedMap, w) -> Vector:
    if isinstance(w, AlgebraicNumber):
        return w.coeffs
    w = tuple(Fraction(c) for c in w)
    if len(w) != m.field.degree:
        raise ValueError(f"expected a vector of length {m.field.degree}")
    return w


def region_index(m: LiftedMap, w) -> int:
    """The 1-based region W_j holding ``w``."""
    return m.base.branch_index(AlgebraicNumber(m.field, _vec(m, w)))


def step(m: LiftedMap, w) -> Vector:
    w = _vec(m, w)
    j = region_index(m, w)
    A = m.field.companion
    wj = m.w_vectors[j - 1]
    d = len(w)
    return tuple(sum((A[r][c] * w[c] for c in range(d)), Fraction(0)) - wj[r] for r in range(d))


# -- regions --------------------------------------------------------------


def _abs_elements(K: NumberField, i: int, ws: Sequence[Vector]) -> list[AlgebraicNumber]:
    """Elements u_j with psi_i(u_j) = |psi_i(w_j)| (real conjugate i)."""
    out = []
    for w in ws:
        a = AlgebraicNumber(K, w)
        out.append(a if K.real_sign(a, i) >= 0 else -a)
    return out


def _max_under(K: NumberField, i: int, elems: Sequence[AlgebraicNumber]) -> AlgebraicNumber:
    best = elems[0]
    for e in elems[1:]:
        if K.real_sign(e - best, i) > 0:
            best = e
    return best


def _upper_rational(K: NumberField, u: AlgebraicNumber, i: int, bits: int = 64) -> Fraction:
    if u.is_rational():
        return u.coeffs[0]
    iv = K.embed(u, i, bits).re
    s = 1 << bits
    return Fraction(-((-iv.hi.numerator * s) // iv.hi.denominator), s)


def _bound(m: LiftedMap, i: int, expanding: bool) -> Bound:
    K = m.field
    if not m.w_vectors or all(not any(w) for w in m.w_vectors):
        return Bound(i, Fraction(0), K.zero)
    if K.is_real_root(i):
        t = K.real_sign(K.beta, i)
        # |beta_i| = psi_i(t*beta); the gap 1 - |beta_i| or |beta_i| - 1 as a field element
        gap = (K.beta * t - 1) if expanding else (1 - K.beta * t)
        ratios = [u / gap for u in _abs_elements(K, i, m.w_vectors)]
        best = _max_under(K, i, ratios)
        return Bound(i, _upper_rational(K, best, i), best)
    bits = 64
    num = max(K.abs_enclosure(AlgebraicNumber(K, w), i, bits).hi for w in m.w_vectors)
    mod = conjugate_modulus(K, i, bits)
    gap = (mod.lo - 1) if expanding else (1 - mod.hi)
    if gap <= 0:
        raise (NotExpanding if expanding else NotPisot)(f"|beta_{i}| not separated from 1")
    r = num / gap
    s = 1 << bits
    return Bound(i, Fraction(-((-r.numerator * s) // r.denominator), s))


def trapping_bounds(m: LiftedMap) -> dict[int, Bound]:
    """R_i >= max_j |psi_i(w_j)| / (1 - |beta_i|) for every contracting conjugate."""
    verdict = is_pisot(m.field)
    if not verdict.is_pisot:
        raise NotPisot(f"{m.field.poly_str()} is not Pisot ({verdict.kind.value})")
    return {i: _bound(m, i, expanding=False) for i in m.field.representative_conjugates()}


def expanding_conjugates(K: NumberField) -> list[int]:
    out = []
    for i in K.representative_conjugates():
        bits = 32
        while bits <= 256:
            mod = conjugate_modulus(K, i, bits)
            if mod.lo > 1:
                out.append(i)
                break
            if mod.hi < 1:
                break
            bits *= 2
    return out


def escape_threshold(m: LiftedMap, i: int) -> Bound:
    """Smallest admissible R with |psi_i(w)| > R forcing |psi_i| to grow forever."""
    if i not in expanding_conjugates(m.field):
        raise NotExpanding(f"|beta_{i}| is not certified > 1")
    return _bound(m, i, expanding=True)


def eigen_scaled_threshold(m: LiftedMap, r, i: int = 2) -> Bound:
    """Threshold r in eigen-coordinates c_i for quadratic fields.

    The companion eigenvector for beta_i is v_i = (-beta', 1) with beta' the
    other root, so |psi_i(v_i)| = |beta - beta_i| and |c_i| > r is the same as
    |psi_i(w)| > r |beta - beta_i|.
    """
    K = m.field
    if K.degree != 2 or i != 2:
        raise ValueError("eigen-coordinate thresholds are only defined here for quadratic fields")
    r = Fraction(r)
    # psi_2(2 beta + g_1) = 2 beta_2 - (beta + beta_2) = beta_2 - beta
    u = K.beta * 2 + K.poly[1]
    if K.real_sign(u, 2) < 0:
        u = -u
    u = u * r
    return Bound(i, _upper_rational(K, u, i), u, label=f"eigen:{r}")


def _exceeds(K: NumberField, w: Vector, b: Bound) -> bool:
    return K.compare_abs(AlgebraicNumber(K, w), b.index, b.test_value) == 1


def within_trap(m: LiftedMap, w: Vector, bounds: dict[int, Bound], w0: Vector) -> bool:
    """|psi_i(w)| <= max(|psi_i(w0)|, R_i) for every bound (certified)."""
    K = m.field
    for i, b in bounds.items():
        a = AlgebraicNumber(K, w)
        a0 = AlgebraicNumber(K, w0)
        if K.is_real_root(i):
            cap = a0 if K.real_sign(a0, i) >= 0 else -a0
            if b.exact is not None and K.real_sign(b.exact - cap, i) > 0:
                cap = b.exact
            if K.compare_abs(a, i, cap) == 1:
                return False
        else:
            cap = max(K.abs_enclosure(a0, i, 64).hi, b.rational)
            if K.compare_abs(a, i, cap) == 1:
                return False
    return True


def orbit(
    m: LiftedMap,
    w0,
    budget: int = DEFAULT_BUDGET,
    thresholds: dict[int, Bound] | None = None,
) -> OrbitOutcome:
    """Iterate ``step`` until a repeat (exact K, L), a certified escape, or the budget runs out.

    ``thresholds`` maps expanding conjugate indices to escape bounds; by default
    the minimal bound is used for every certified expanding conjugate.
    """
    w = _vec(m, w0)
    K = m.field
    region_index(m, w)  # domain check
    if thresholds is None:
        thresholds = {i: escape_threshold(m, i) for i in expanding_conjugates(K)}
    qp = _lcm(m.q, _den(w))
    seen: dict[tuple[int, ...], int] = {}
    prefix: list[Vector] = []
    n = 0
    while True:
        key = tuple(int(c * qp) for c in w)
        if key in seen:
            k = seen[key]
            return EventuallyPeriodic(k, n - k, tuple(prefix))
        seen[key] = n
        prefix.append(w)
        for i, b in thresholds.items():
            if _exceeds(K, w, b):
                return ProvablyInfinite(n, i, b, tuple(prefix))
        if n >= budget:
            return Undetermined(n, tuple(prefix))
        w = step(m, w)
        n += 1


@dataclass(frozen=True)
class CentralOrbit:
    """Orbit data read as S-bar iterates of the central tile E_k - F^n(x0)."""

    outcome: OrbitOutcome
    symbols: tuple[str | None, ...]

    @property
    def K(self) -> int | None:
        return self.outcome.preperiod if isinstance(self.outcome, EventuallyPeriodic) else None

    @property
    def L(self) -> int | None:
        return self.outcome.period if isinstance(self.outcome, EventuallyPeriodic) else None


def central_orbit(m: LiftedMap, x0: AlgebraicNumber, budget: int = DEFAULT_BUDGET) -> CentralOrbit:
    out = orbit(m, x0, budget)
    symbols = tuple(m.base.symbol_at(AlgebraicNumber(m.field, w)) for w in out.prefix)
    return CentralOrbit(out, symbols)


def verify_periodic(m: LiftedMap, w0, outcome: EventuallyPeriodic) -> bool:
    """Independent recomputation: f^{K+L}(w0) == f^K(w0)."""
    w = _vec(m, w0)
    pts = [w]
    for _ in range(outcome.preperiod + outcome.period):
        pts.append(step(m, pts[-1]))
    return pts[-1] == pts[outcome.preperiod]


def outcome_report(m: LiftedMap, outcome: OrbitOutcome, max_prefix: int = 64) -> dict:
    K = m.field
    pts = outcome.prefix[:max_prefix]
    qp = m.q
    for w in outcome.prefix:
        qp = _lcm(qp, _den(w))
    rep: dict = {"status": outcome.status}
    if isinstance(outcome, EventuallyPeriodic):
        rep.update(preperiod=outcome.preperiod, period=outcome.period)
    elif isinstance(outcome, ProvablyInfinite):
        b = outcome.threshold
        a = AlgebraicNumber(K, outcome.prefix[-1])
        rep.update(
            escape_iterate=outcome.escape_iterate,
            conjugate=outcome.conjugate,
            threshold={
                "label": b.label,
                "rational_upper": f"{b.rational.numerator}/{b.rational.denominator}",
                "exact_under_conjugate": b.exact.to_literal() if b.exact is not None else None,
                "approx": f"{float(b.rational):.12g}",
            },
            escape_modulus_approx=f"{float(K.abs_enclosure(a, outcome.conjugate, 64).mid):.12g}",
        )
    else:
        rep.update(iterations=outcome.iterations)
    rep["scale"] = qp
    rep["orbit_prefix"] = [
        {"scaled": [int(c * qp) for c in w], "exact": AlgebraicNumber(K, w).to_literal()} for w in pts
    ]
    rep["prefix_truncated"] = len(outcome.prefix) > max_prefix
    return rep
