"""Offset machinery for rectangle substitutions: edge substitutions, prefix and
suffix sets, the difference set and the finite candidate list in the Pisot case.

An offset along a fault line is written as

    O = beta**n |L_0| + sum_k beta**k (-s_k - p_k),   s_k in Q_sx, p_k in Q_px,

so every conjugate |psi_j(O)| with |beta_j| < 1 is bounded by a geometric
series in max_D |psi_j|.  Together with |O| <= longest edge this leaves finitely
many lattice points.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from .betamap import BetaTransform
from .field import AlgebraicNumber, NumberField, PisotVerdict, conjugate_modulus, is_pisot
from .subst1d import Substitution1D, SubstitutionError, build


class IncommensurateSegment(ValueError):
    pass


def _sorted_unique(values: Iterable[AlgebraicNumber]) -> tuple[AlgebraicNumber, ...]:
    uniq = set(values)
    return tuple(sorted(uniq, key=functools.cmp_to_key(lambda a, b: a.field.compare(a, b))))


@dataclass(frozen=True)
class EdgeSubstitution:
    """S_lower acts on top edges of lower tiles, S_upper on bottom edges of upper tiles.

    Lower words are read left to right, upper words right to left (the boundary
    orientation flips).  When top and bottom edges carry the same left-to-right
    words the upper rule is the reversal of the lower one; otherwise pass
    ``upper_rule`` explicitly.
    """

    lower: Substitution1D
    upper: Substitution1D

    @property
    def field(self) -> NumberField:
        return self.lower.field

    @classmethod
    def from_lower(cls, lower: Substitution1D, upper_rule: Mapping[str, Sequence[str]] | None = None):
        if upper_rule is None:
            upper_rule = {a: tuple(reversed(lower.rule[a])) for a in lower.alphabet}
        upper = build(lower.alphabet, upper_rule, heights=lower.heights)
        if upper.field != lower.field:
            raise SubstitutionError("upper and lower edge substitutions live in different fields")
        return cls(lower, upper)

    def is_reversal(self) -> bool:
        return all(tuple(reversed(self.lower.rule[a])) == tuple(self.upper.rule[a]) for a in self.lower.alphabet)

    def height(self, symbol: str) -> AlgebraicNumber:
        return self.lower.height(symbol)


@dataclass(frozen=True)
class InitialSegment:
    length: AlgebraicNumber
    lower: tuple[AlgebraicNumber, ...]  # a_0 = 0 < ... < a_k = |L|
    upper: tuple[AlgebraicNumber, ...]  # b_0 = 0 < ... < b_k = |L|

    def __post_init__(self):
        for name, part in (("lower", self.lower), ("upper", self.upper)):
            if len(part) < 2 or not part[0].is_zero() or part[-1] != self.length:
                raise IncommensurateSegment(f"{name} partition must run from 0 to |L|")
            for x, y in zip(part, part[1:]):
                if not x < y:
                    raise IncommensurateSegment(f"{name} partition is not strictly increasing")


def segment_from_words(e: EdgeSubstitution, lower_word: Sequence[str], upper_word: Sequence[str]) -> InitialSegment:
    """The segment covered by lower tiles with top edges ``lower_word`` and upper tiles ``upper_word``."""
    K = e.field

    def part(word):
        pts = [K.zero]
        for k in word:
            pts.append(pts[-1] + e.height(k))
        return tuple(pts)

    lo, up = part(lower_word), part(upper_word)
    if lo[-1] != up[-1]:
        raise IncommensurateSegment("upper and lower words have different lengths")
    return InitialSegment(lo[-1], lo, up)


def _check_commensurate(e: EdgeSubstitution, seg: InitialSegment) -> None:
    heights = set(e.lower.heights)
    for part in (seg.lower, seg.upper):
        for x, y in zip(part, part[1:]):
            if x.field != e.field:
                raise IncommensurateSegment("segment lies in a different field")
            if (y - x) not in heights:
                raise IncommensurateSegment(f"cell of length {y - x} matches no edge length")


def image_prefixes(sub: Substitution1D, symbol: str) -> tuple[AlgebraicNumber, ...]:
    """Left endpoints of the tiles of S(symbol): 0, |u_1|, |u_1 u_2|, ..."""
    out = [sub.field.zero]
    for k in sub.rule[symbol][:-1]:
        out.append(out[-1] + sub.height(k))
    return tuple(out)


def image_suffixes(sub: Substitution1D, symbol: str) -> tuple[AlgebraicNumber, ...]:
    """Distances beta|e| - b_i from the right end of S(symbol) to its partition points.

    Upper words are read right to left, so these are the running sums of the word.
    """
    return image_prefixes(sub, symbol)


def prefix_suffix_sets(
    e: EdgeSubstitution, segments: Sequence[InitialSegment] = ()
) -> tuple[tuple[AlgebraicNumber, ...], tuple[AlgebraicNumber, ...]]:
    px: list[AlgebraicNumber] = []
    sx: list[AlgebraicNumber] = []
    for seg in segments:
        _check_commensurate(e, seg)
        px.extend(seg.lower)
        sx.extend(seg.length - b for b in seg.upper)
    for a in e.lower.alphabet:
        px.extend(image_prefixes(e.lower, a))
        sx.extend(image_suffixes(e.upper, a))
    return _sorted_unique(px), _sorted_unique(sx)


def difference_set(q_px: Sequence[AlgebraicNumber], q_sx: Sequence[AlgebraicNumber]) -> tuple[AlgebraicNumber, ...]:
    return _sorted_unique(-s - p for s in q_sx for p in q_px)


@dataclass(frozen=True)
class NonPisotNoBound:
    """Typed outcome: without contracting conjugates no finiteness bound exists."""

    verdict: PisotVerdict
    Q_px: tuple[AlgebraicNumber, ...]
    Q_sx: tuple[AlgebraicNumber, ...]
    D: tuple[AlgebraicNumber, ...]

    status = "non_pisot_no_bound"


@dataclass(frozen=True)
class OffsetBoundResult:
    Q_px: tuple[AlgebraicNumber, ...]
    Q_sx: tuple[AlgebraicNumber, ...]
    D: tuple[AlgebraicNumber, ...]
    m: dict  # conjugate index -> certified rational bound (m_1 bounds |O| itself)
    tail: dict  # j >= 2 -> certified rational bound on |psi_j(O)|
    q: int
    candidates: tuple[AlgebraicNumber, ...]
    m1_source: str  # "longest_edge" or "longest_segment"

    status = "bounded"

    def contains(self, offset: AlgebraicNumber) -> bool:
        return offset in set(self.candidates)


def _den(a: AlgebraicNumber) -> int:
    q = 1
    for c in a.coeffs:
        q = q * c.denominator // math.gcd(q, c.denominator)
    return q


def _ceil_dyadic(x: Fraction, bits: int = 64) -> Fraction:
    s = 1 << bits
    return Fraction(-((-x.numerator * s) // x.denominator), s)


def _abs_upper(K: NumberField, a: AlgebraicNumber, j: int) -> Fraction:
    return _ceil_dyadic(K.abs_enclosure(a, j, 64).hi)


def _coordinate_box(K: NumberField, bounds: Sequence[Fraction]) -> list[Fraction]:
    """|w_k| bounds for vectors with |psi_i(w)| <= bounds[i-1], via the inverse Vandermonde matrix.

    The inverse is computed numerically; the 1% padding dwarfs its rounding error
    and every enumerated point is re-checked with certified comparisons.
    """
    d = K.degree
    with mpmath.workdps(60):
        roots = []
        for i in range(d):
            mid = K.root_box(i + 1, 180)
            re, im = mid.re.mid, mid.im.mid
            roots.append(mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator))
        V = mpmath.matrix([[roots[i] ** k for k in range(d)] for i in range(d)])
        Vi = V ** -1
        out = []
        for k in range(d):
            s = sum(abs(Vi[k, i]) * (mpmath.mpf(bounds[i].numerator) / bounds[i].denominator) for i in range(d))
            out.append(Fraction(str(mpmath.nstr(s * mpmath.mpf("1.01") + mpmath.mpf("1e-9"), 30))))
    return out


def offset_bound(e: EdgeSubstitution, segments: Sequence[InitialSegment] = ()) -> OffsetBoundResult | NonPisotNoBound:
    K = e.field
    q_px, q_sx = prefix_suffix_sets(e, segments)
    D = difference_set(q_px, q_sx)
    verdict = is_pisot(K)
    if not verdict.is_pisot:
        return NonPisotNoBound(verdict, q_px, q_sx, D)

    edge_lengths = list(e.lower.heights)
    longest_edge = max(edge_lengths)
    seg_lengths = [s.length for s in segments]
    m1_source = "longest_edge"
    m1 = longest_edge
    if seg_lengths and max(seg_lengths) > longest_edge:
        m1, m1_source = max(seg_lengths), "longest_segment"

    q = 1
    for a in list(D) + edge_lengths + seg_lengths:
        q = q * _den(a) // math.gcd(q, _den(a))

    m1_upper = m1.coeffs[0] if m1.is_rational() else _ceil_dyadic(m1.enclosure(64).hi)
    m = {1: m1_upper}
    tail = {}
    lengths = edge_lengths + seg_lengths
    for j in range(2, K.degree + 1):
        mj = max(_abs_upper(K, x, j) for x in D)
        m[j] = mj
        gap = 1 - conjugate_modulus(K, j, 64).hi
        tail[j] = (
            _ceil_dyadic(mj / gap)
            + max(_abs_upper(K, x, j) for x in lengths)
            + max(_abs_upper(K, x, j) for x in edge_lengths)
        )

    candidates: list[AlgebraicNumber] = []
    if K.degree == 1:
        n = math.floor(m1_upper * q)
        candidates = [K.rational(Fraction(k, q)) for k in range(-n, n + 1)]
    else:
        box_bounds = [m1_upper] + [tail[j] for j in range(2, K.degree + 1)]
        coord = _coordinate_box(K, box_bounds)
        ranges = [range(-math.ceil(c * q), math.ceil(c * q) + 1) for c in coord]
        reps = K.representative_conjugates()
        for idx in _product(ranges):
            v = AlgebraicNumber(K, [Fraction(n, q) for n in idx])
            if K.compare_abs(v, 1, m1_upper) == 1:
                continue
            if any(K.compare_abs(v, j, tail[j], cap_bits=256) == 1 for j in reps):
                continue
            candidates.append(v)
        candidates = list(_sorted_unique(candidates))
    return OffsetBoundResult(q_px, q_sx, D, m, tail, q, tuple(candidates), m1_source)


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for rest in _product(ranges[1:]):
            yield (head,) + rest


def misfit_orbit(t: BetaTransform, x0, n: int) -> list[AlgebraicNumber]:
    """x0, F(x0), ..., F^n(x0): the misfit vertex offset after each substitution step."""
    if not isinstance(x0, AlgebraicNumber):
        x0 = t.field.rational(x0)
    out = [x0]
    for _ in range(n):
        out.append(t(out[-1]))
    return out


def all_distinct(values: Sequence[AlgebraicNumber]) -> bool:
    """Exact pairwise distinctness (coefficient vectors are canonical)."""
    return len(set(values)) == len(values)


def segments_from_json(field: NumberField, data) -> list[InitialSegment]:
    """``[{"length": lit, "lower": [lit, ...], "upper": [lit, ...]}, ...]`` or ``{"segments": [...]}``."""
    if isinstance(data, Mapping):
        data = data.get("segments", [])
    out = []
    for item in data:
        lit = lambda v: AlgebraicNumber.from_literal(field, v)  # noqa: E731
        out.append(
            InitialSegment(lit(item["length"]), tuple(lit(v) for v in item["lower"]), tuple(lit(v) for v in item["upper"]))
        )
    return out


def segments_to_json(segments: Sequence[InitialSegment]) -> list[dict]:
    return [
        {
            "length": s.length.to_literal(),
            "lower": [x.to_literal() for x in s.lower],
            "upper": [x.to_literal() for x in s.upper],
        }
        for s in segments
    ]


def result_report(res: OffsetBoundResult | NonPisotNoBound, digits: int = 12) -> dict:
    def lit(v: AlgebraicNumber) -> dict:
        return {"exact": v.to_literal(), "approx": v.approx(digits)}

    rep = {
        "status": res.status,
        "prefix_set": [lit(x) for x in res.Q_px],
        "suffix_set": [lit(x) for x in res.Q_sx],
        "difference_set": [lit(x) for x in res.D],
    }
    if isinstance(res, NonPisotNoBound):
        rep["pisot"] = res.verdict.kind.value
        rep["witness_conjugate"] = res.verdict.witness
        return rep
    rep["q"] = res.q
    rep["m"] = {str(j): f"{v.numerator}/{v.denominator}" for j, v in sorted(res.m.items())}
    rep["conjugate_bounds"] = {str(j): f"{v.numerator}/{v.denominator}" for j, v in sorted(res.tail.items())}
    rep["m1_source"] = res.m1_source
    rep["candidate_count"] = len(res.candidates)
    rep["candidates"] = [lit(x) for x in res.candidates]
    return rep
