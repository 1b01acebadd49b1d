"""Rectangle inflate-and-subdivide substitutions in the plane.

Tiles are axis-parallel rectangles with sides in Q(beta).  Every prototile P
is inflated by beta and cut into translated prototiles; iterating gives the
patches S^n(P).  Coordinates are kept as integer coefficient vectors over a
common denominator, so expanding only needs the integer companion matrix.
"""

from __future__ import annotations

import functools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import AlgebraicNumber, NumberField, field_from_poly
from .offsets import EdgeSubstitution, InitialSegment
from .subst1d import Substitution1D, SubstitutionError, build

IVec = tuple  # tuple[int, ...], a value scaled by the rule denominator


class RuleError(ValueError):
    pass


class InvalidRule(RuleError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations[:3]))


class NotOnEdgeInterior(ValueError):
    pass


@dataclass(frozen=True)
class Prototile:
    label: str
    w: AlgebraicNumber
    h: AlgebraicNumber


@dataclass(frozen=True)
class Placement:
    tile: str
    dx: AlgebraicNumber
    dy: AlgebraicNumber


@dataclass(frozen=True)
class RectRule2D:
    field: NumberField
    prototiles: Mapping[str, Prototile]
    placements: Mapping[str, tuple[Placement, ...]]
    edge_names: tuple[tuple[str, AlgebraicNumber], ...] = ()

    @property
    def beta(self) -> AlgebraicNumber:
        return self.field.beta

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.prototiles)

    def edge_name(self, length: AlgebraicNumber) -> str:
        for name, v in self.edge_names:
            if v == length:
                return name
        return str(length)

    def __hash__(self) -> int:
        return id(self)


# -- parsing ------------------------------------------------------------------

_RULE_FIELDS = {"polynomial", "prototiles", "placements", "edges"}


def rule_from_json(data: Mapping) -> RectRule2D:
    """Parse a rule file; algebraic values are coefficient literals ``["p/q", ...]``."""
    unknown = set(data) - _RULE_FIELDS
    if unknown:
        raise RuleError(f"unknown fields {sorted(unknown)}")
    for key in ("polynomial", "prototiles", "placements"):
        if key not in data:
            raise RuleError(f"missing field {key!r}")
    K = field_from_poly(data["polynomial"])
    lit = lambda v: AlgebraicNumber.from_literal(K, v)  # noqa: E731
    protos = {}
    for label, dims in data["prototiles"].items():
        extra = set(dims) - {"w", "h"}
        if extra:
            raise RuleError(f"prototiles.{label}: unknown fields {sorted(extra)}")
        protos[label] = Prototile(label, lit(dims["w"]), lit(dims["h"]))
    places = {}
    for label, items in data["placements"].items():
        if label not in protos:
            raise RuleError(f"placements.{label}: no such prototile")
        row = []
        for k, item in enumerate(items):
            extra = set(item) - {"tile", "at"}
            if extra:
                raise RuleError(f"placements.{label}[{k}]: unknown fields {sorted(extra)}")
            dx, dy = item["at"]
            row.append(Placement(item["tile"], lit(dx), lit(dy)))
        places[label] = tuple(row)
    for label in protos:
        if label not in places:
            raise RuleError(f"placements: no entry for prototile {label!r}")
    edges = tuple((name, lit(v)) for name, v in data.get("edges", {}).items())
    return RectRule2D(K, protos, places, edges)


def rule_to_json(r: RectRule2D) -> dict:
    out = {
        "polynomial": list(r.field.poly),
        "prototiles": {p.label: {"w": p.w.to_literal(), "h": p.h.to_literal()} for p in r.prototiles.values()},
        "placements": {
            a: [{"tile": c.tile, "at": [c.dx.to_literal(), c.dy.to_literal()]} for c in cs]
            for a, cs in r.placements.items()
        },
    }
    if r.edge_names:
        out["edges"] = {name: v.to_literal() for name, v in r.edge_names}
    return out


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class RuleViolation:
    code: str  # overlap | gap | out_of_bounds | unknown_tile | area | edge_inconsistent
    prototile: str
    message: str
    witness: tuple = ()


@dataclass
class RuleReport:
    violations: list[RuleViolation]
    edge_words: dict  # side -> prototile -> tuple of edge names (left to right / bottom to top)
    top: Substitution1D | None = None
    bottom: Substitution1D | None = None

    @property
    def valid(self) -> bool:
        return not self.violations

    def edge_substitution(self) -> EdgeSubstitution:
        if self.top is None or self.bottom is None:
            raise InvalidRule(self.violations or [RuleViolation("edge_inconsistent", "", "no edge substitution")])
        upper = {a: tuple(reversed(self.bottom.rule[a])) for a in self.bottom.alphabet}
        return EdgeSubstitution.from_lower(self.top, upper)


def _fmt_point(x: AlgebraicNumber, y: AlgebraicNumber) -> str:
    return f"({x}, {y})"


def _sweep(r: RectRule2D, label: str) -> list[RuleViolation]:
    """Exact-cover check of beta*P by vertical slabs between distinct child x-coordinates."""
    K = r.field
    P = r.prototiles[label]
    W, H = P.w * r.beta, P.h * r.beta
    kids = []
    out = []
    for idx, c in enumerate(r.placements[label]):
        if c.tile not in r.prototiles:
            out.append(RuleViolation("unknown_tile", label, f"{label}: child {idx} uses unknown tile {c.tile!r}", (idx,)))
            continue
        q = r.prototiles[c.tile]
        x0, y0, x1, y1 = c.dx, c.dy, c.dx + q.w, c.dy + q.h
        if x0.sign() < 0 or y0.sign() < 0 or x1 > W or y1 > H:
            out.append(
                RuleViolation(
                    "out_of_bounds",
                    label,
                    f"{label}: child {idx} ({c.tile} at {_fmt_point(x0, y0)}) leaves [0, {W}] x [0, {H}]",
                    (idx,),
                )
            )
        kids.append((idx, x0, y0, x1, y1))
    key = functools.cmp_to_key(K.compare)
    xs = sorted(set([K.zero, W] + [v for k in kids for v in (k[1], k[3]) if K.zero <= v <= W]), key=key)
    seen_pairs = set()
    for xa, xb in zip(xs, xs[1:]):
        active = sorted((k for k in kids if k[1] <= xa and k[3] >= xb), key=lambda k: key(k[2]))
        cur, prev = K.zero, None
        mid = (xa + xb) / 2
        for k in active:
            if k[2] > cur:
                out.append(RuleViolation("gap", label, f"{label}: uncovered point {_fmt_point(mid, (cur + k[2]) / 2)}",
                                         (mid, (cur + k[2]) / 2)))
            elif k[2] < cur and prev is not None:
                pair = (prev[0], k[0])
                if pair not in seen_pairs:
                    seen_pairs.add(pair)
                    top = cur if cur < k[4] else k[4]
                    pt = (mid, (k[2] + top) / 2)
                    out.append(RuleViolation("overlap", label, f"{label}: children {pair[0]} and {pair[1]} overlap at {_fmt_point(*pt)}",
                                             pair + pt))
            if k[4] > cur:
                cur, prev = k[4], k
        if cur < H:
            out.append(RuleViolation("gap", label, f"{label}: uncovered point {_fmt_point(mid, (cur + H) / 2)}",
                                     (mid, (cur + H) / 2)))
    area = K.zero
    for k in kids:
        area = area + (k[3] - k[1]) * (k[4] - k[2])
    if area != W * H and not any(v.code in ("overlap", "gap") for v in out):
        out.append(RuleViolation("area", label, f"{label}: child areas sum to {area}, expected {W * H}"))
    return out


def _edge_words(r: RectRule2D, label: str) -> dict:
    K = r.field
    P = r.prototiles[label]
    W, H = P.w * r.beta, P.h * r.beta
    key = functools.cmp_to_key(K.compare)
    kids = [(c, r.prototiles[c.tile]) for c in r.placements[label] if c.tile in r.prototiles]
    top = sorted((k for k in kids if k[0].dy + k[1].h == H), key=lambda k: key(k[0].dx))
    bottom = sorted((k for k in kids if k[0].dy.is_zero()), key=lambda k: key(k[0].dx))
    left = sorted((k for k in kids if k[0].dx.is_zero()), key=lambda k: key(k[0].dy))
    right = sorted((k for k in kids if k[0].dx + k[1].w == W), key=lambda k: key(k[0].dy))
    return {
        "top": tuple(r.edge_name(q.w) for _, q in top),
        "bottom": tuple(r.edge_name(q.w) for _, q in bottom),
        "left": tuple(r.edge_name(q.h) for _, q in left),
        "right": tuple(r.edge_name(q.h) for _, q in right),
    }


def _induced(r: RectRule2D, words: dict, side: str, out: list) -> Substitution1D | None:
    horizontal = side in ("top", "bottom")
    rule: dict[str, tuple[str, ...]] = {}
    lengths: dict[str, AlgebraicNumber] = {}
    for label, P in r.prototiles.items():
        length = P.w if horizontal else P.h
        name = r.edge_name(length)
        lengths[name] = length
        w = words[side][label]
        if name in rule and rule[name] != w:
            out.append(RuleViolation("edge_inconsistent", label,
                                     f"{side} edge {name!r} substitutes to {''.join(rule[name])} and {''.join(w)}"))
            return None
        rule[name] = w
    named = [n for n, _ in r.edge_names if n in rule]
    alphabet = named + sorted(n for n in rule if n not in named)
    try:
        return build(alphabet, rule, heights=[lengths[a] for a in alphabet])
    except SubstitutionError as exc:
        out.append(RuleViolation("edge_inconsistent", "", f"{side} edge substitution: {exc}"))
        return None


def validate_rule(r: RectRule2D) -> RuleReport:
    violations: list[RuleViolation] = []
    for label in r.prototiles:
        violations.extend(_sweep(r, label))
    words = {side: {} for side in ("top", "bottom", "left", "right")}
    for label in r.prototiles:
        for side, w in _edge_words(r, label).items():
            words[side][label] = w
    report = RuleReport(violations, words)
    if not violations:
        report.top = _induced(r, words, "top", violations)
        report.bottom = _induced(r, words, "bottom", violations)
    return report


def structure_matrix(r: RectRule2D) -> list[list[int]]:
    labels = r.labels
    pos = {a: i for i, a in enumerate(labels)}
    M = [[0] * len(labels) for _ in labels]
    for a in labels:
        for c in r.placements[a]:
            M[pos[a]][pos[c.tile]] += 1
    return M


# -- patches ------------------------------------------------------------------


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass
class _Compiled:
    den: int
    dims: dict  # label -> (w IVec, h IVec)
    kids: dict  # label -> list of (child label, dx IVec, dy IVec)
    A: tuple
    beta_f: float


def _compile(r: RectRule2D) -> _Compiled:
    den = 1
    vals = [p.w for p in r.prototiles.values()] + [p.h for p in r.prototiles.values()]
    vals += [v for cs in r.placements.values() for c in cs for v in (c.dx, c.dy)]
    for v in vals:
        for c in v.coeffs:
            den = _lcm(den, c.denominator)

    def iv(a: AlgebraicNumber) -> IVec:
        return tuple(int(c * den) for c in a.coeffs)

    dims = {a: (iv(p.w), iv(p.h)) for a, p in r.prototiles.items()}
    kids = {a: [(c.tile, iv(c.dx), iv(c.dy)) for c in cs] for a, cs in r.placements.items()}
    return _Compiled(den, dims, kids, r.field.companion, float(r.field.beta_interval(64).mid))


def _mul_beta(A, v: IVec) -> IVec:
    d = len(v)
    return tuple(sum(A[i][j] * v[j] for j in range(d)) for i in range(d))


def _add(u: IVec, v: IVec) -> IVec:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: IVec, v: IVec) -> IVec:
    return tuple(a - b for a, b in zip(u, v))


@dataclass(frozen=True)
class Tile2D:
    label: str
    x: IVec
    y: IVec


@dataclass
class Patch2D:
    """S^level(root) with tiles at integer-scaled positions (value = vec / den)."""

    rule: RectRule2D
    root: str
    level: int
    tiles: list[Tile2D]
    den: int
    _c: _Compiled = dc_field(repr=False, default=None)

    def value(self, v: IVec) -> AlgebraicNumber:
        return AlgebraicNumber(self.rule.field, [Fraction(c, self.den) for c in v])

    def positions(self) -> list[tuple[str, AlgebraicNumber, AlgebraicNumber]]:
        return [(t.label, self.value(t.x), self.value(t.y)) for t in self.tiles]

    def dims(self, label: str) -> tuple[AlgebraicNumber, AlgebraicNumber]:
        P = self.rule.prototiles[label]
        return P.w, P.h

    @property
    def support(self) -> tuple[AlgebraicNumber, AlgebraicNumber]:
        s = self.rule.beta ** self.level
        P = self.rule.prototiles[self.root]
        return P.w * s, P.h * s

    def __len__(self) -> int:
        return len(self.tiles)


def expand(r: RectRule2D, root: str, n: int, *, check: bool = True) -> Patch2D:
    if root not in r.prototiles:
        raise RuleError(f"no prototile {root!r}")
    if n < 0:
        raise ValueError("level must be >= 0")
    if check:
        rep = validate_rule(r)
        if not rep.valid:
            raise InvalidRule(rep.violations)
    c = _compile(r)
    zero = (0,) * r.field.degree
    tiles = [Tile2D(root, zero, zero)]
    for _ in range(n):
        nxt = []
        for t in tiles:
            bx, by = _mul_beta(c.A, t.x), _mul_beta(c.A, t.y)
            for lab, dx, dy in c.kids[t.label]:
                nxt.append(Tile2D(lab, _add(bx, dx), _add(by, dy)))
        tiles = nxt
    return Patch2D(r, root, n, tiles, c.den, c)


def substitute(p: Patch2D) -> Patch2D:
    """Apply the rule once to every tile of ``p`` (independent of ``expand``'s loop)."""
    c = p._c or _compile(p.rule)
    out = []
    for t in p.tiles:
        for lab, dx, dy in c.kids[t.label]:
            out.append(Tile2D(lab, _add(_mul_beta(c.A, t.x), dx), _add(_mul_beta(c.A, t.y), dy)))
    return Patch2D(p.rule, p.root, p.level + 1, out, p.den, c)


# -- exact comparisons with a float fast path --------------------------------


class _Cmp:
    """Sign of scaled vectors: float when clearly separated, exact otherwise."""

    def __init__(self, field: NumberField, den: int, beta_f: float):
        self.K = field
        self.den = den
        self.pows = [beta_f**k for k in range(field.degree)]

    def f(self, v: IVec) -> float:
        return sum(c * p for c, p in zip(v, self.pows)) / self.den

    def sign(self, v: IVec) -> int:
        approx = sum(c * p for c, p in zip(v, self.pows))
        scale = sum(abs(c) * p for c, p in zip(v, self.pows))
        if approx > 1e-9 * scale + 1e-300:
            return 1
        if approx < -1e-9 * scale - 1e-300:
            return -1
        if not any(v):
            return 0
        return self.K.real_sign(AlgebraicNumber(self.K, v), 1)

    def cmp(self, u: IVec, v: IVec) -> int:
        return self.sign(_sub(u, v))


# -- census -------------------------------------------------------------------


@dataclass(frozen=True)
class CensusClass:
    orientation: str  # "h": lower/upper across a horizontal line, "v": left/right across a vertical one
    first: str
    second: str
    offset: AlgebraicNumber
    multiplicity: int


@dataclass(frozen=True)
class Census:
    classes: tuple[CensusClass, ...]

    @property
    def count(self) -> int:
        return len(self.classes)

    def offsets(self, orientation: str | None = None) -> set[AlgebraicNumber]:
        return {c.offset for c in self.classes if orientation is None or c.orientation == orientation}

    def keys(self) -> set[tuple]:
        return {(c.orientation, c.first, c.second, c.offset) for c in self.classes}


def _line_pairs(cmp: _Cmp, below, above) -> Iterable[tuple]:
    """Pairs (i, j) whose intervals [lo, hi) overlap in positive length; lists sorted by lo."""
    i = j = 0
    while i < len(below) and j < len(above):
        a0, a1 = below[i][0], below[i][1]
        b0, b1 = above[j][0], above[j][1]
        if cmp.cmp(b0, a1) < 0 and cmp.cmp(a0, b1) < 0:
            yield below[i], above[j]
        c = cmp.cmp(a1, b1)
        if c <= 0:
            i += 1
        if c >= 0:
            j += 1


def adjacency_census(p: Patch2D) -> Census:
    """Classes of tile pairs sharing an edge segment of positive length.

    Horizontal contacts record offset = left(upper) - left(lower), vertical
    ones bottom(right) - bottom(left); classes are keyed by orientation, the
    ordered label pair and the exact offset.
    """
    c = p._c or _compile(p.rule)
    cmp = _Cmp(p.rule.field, p.den, c.beta_f)
    tops: dict[IVec, list] = defaultdict(list)
    bottoms: dict[IVec, list] = defaultdict(list)
    rights: dict[IVec, list] = defaultdict(list)
    lefts: dict[IVec, list] = defaultdict(list)
    for t in p.tiles:
        w, h = c.dims[t.label]
        x1, y1 = _add(t.x, w), _add(t.y, h)
        tops[y1].append((t.x, x1, t.label))
        bottoms[t.y].append((t.x, x1, t.label))
        rights[x1].append((t.y, y1, t.label))
        lefts[t.x].append((t.y, y1, t.label))
    counts: Counter = Counter()
    for orient, lo_map, hi_map in (("h", tops, bottoms), ("v", rights, lefts)):
        for line, below in lo_map.items():
            above = hi_map.get(line)
            if not above:
                continue
            below.sort(key=lambda e: cmp.f(e[0]))
            above.sort(key=lambda e: cmp.f(e[0]))
            for a, b in _line_pairs(cmp, below, above):
                counts[(orient, a[2], b[2], _sub(b[0], a[0]))] += 1

    def order(k1, k2):
        if k1[:3] != k2[:3]:
            return -1 if k1[:3] < k2[:3] else 1
        return cmp.cmp(k1[3], k2[3])

    keys = sorted(counts, key=functools.cmp_to_key(order))
    return Census(tuple(CensusClass(k[0], k[1], k[2], p.value(k[3]), counts[k]) for k in keys))


def census_report(cen: Census, digits: int = 12) -> dict:
    return {
        "distinct_classes": cen.count,
        "classes": [
            {
                "orientation": k.orientation,
                "pair": [k.first, k.second],
                "offset": {"exact": k.offset.to_literal(), "approx": k.offset.approx(digits)},
                "multiplicity": k.multiplicity,
            }
            for k in cen.classes
        ],
    }


# -- misfits ------------------------------------------------------------------


def _tile_box(r: RectRule2D, label: str, x: AlgebraicNumber, y: AlgebraicNumber):
    P = r.prototiles[label]
    return x, y, x + P.w, y + P.h


def find_misfits(r: RectRule2D, root: str) -> list[tuple[AlgebraicNumber, AlgebraicNumber]]:
    """Corners of upper tiles in S(root) strictly inside the top edge of a lower tile."""
    p = expand(r, root, 1)
    boxes = [(lab,) + _tile_box(r, lab, x, y) for lab, x, y in p.positions()]
    out = []
    for lab, x0, y0, x1, y1 in boxes:
        for vx in (x0, x1):
            for lab2, a0, b0, a1, b1 in boxes:
                if b1 == y0 and a0 < vx < a1:
                    pt = (vx, y0)
                    if pt not in out:
                        out.append(pt)
    key = functools.cmp_to_key(lambda u, v: r.field.compare(u[1], v[1]) or r.field.compare(u[0], v[0]))
    return sorted(out, key=key)


@dataclass(frozen=True)
class MisfitStep:
    level: int
    tile: str  # lower tile whose top edge carries the point
    edge: str
    local_offset: AlgebraicNumber  # distance from the edge's left endpoint
    value: AlgebraicNumber  # the same position in E = union of E_k: start(E_edge) + local offset


def track_misfit(r: RectRule2D, vertex, root: str, n: int) -> list[MisfitStep]:
    """Follow beta**(k-1) * vertex through S^k(root) for k = 1..n.

    Only tiles whose closure contains the point are carried from level to level.
    The starting vertex must lie strictly inside a top edge; later levels use
    the right-continuous convention left <= x < right.
    """
    rep = validate_rule(r)
    if not rep.valid or rep.top is None:
        raise InvalidRule(rep.violations)
    top = rep.top
    starts = {}
    acc = r.field.zero
    for a, h in zip(top.alphabet, top.heights):
        starts[a] = acc
        acc = acc + h
    K = r.field
    vx, vy = (v if isinstance(v, AlgebraicNumber) else AlgebraicNumber.from_literal(K, v) for v in vertex)
    level1 = [(lab,) + _tile_box(r, lab, x, y) for lab, x, y in expand(r, root, 1, check=False).positions()]

    def touching(boxes, px, py):
        return [b for b in boxes if b[1] <= px <= b[3] and b[2] <= py <= b[4]]

    cand = touching(level1, vx, vy)
    if not any(b[4] == vy and b[1] < vx < b[3] for b in cand):
        raise NotOnEdgeInterior(f"{_fmt_point(vx, vy)} is not inside the top edge of a tile of S({root})")
    steps = []
    px, py = vx, vy
    for k in range(1, n + 1):
        if k > 1:
            px, py = px * r.beta, py * r.beta
            kids = []
            for lab, x0, y0, _, _ in cand:
                bx, by = x0 * r.beta, y0 * r.beta
                for ch in r.placements[lab]:
                    kids.append((ch.tile,) + _tile_box(r, ch.tile, bx + ch.dx, by + ch.dy))
            cand = touching(kids, px, py)
        below = [b for b in cand if b[4] == py and b[1] <= px < b[3]]
        if len(below) != 1:
            raise AssertionError(f"level {k}: {len(below)} tiles below the tracked point")
        lab, x0 = below[0][0], below[0][1]
        edge = r.edge_name(r.prototiles[lab].w)
        off = px - x0
        steps.append(MisfitStep(k, lab, edge, off, starts[edge] + off))
    return steps


# -- initial segments ----------------------------------------------------------


def initial_segments(r: RectRule2D) -> list[InitialSegment]:
    """Horizontal interior lines of the level-one patches, cut into runs covered on both sides."""
    K = r.field
    key = functools.cmp_to_key(K.compare)
    seen = {}
    for root in r.labels:
        boxes = [(lab,) + _tile_box(r, lab, x, y) for lab, x, y in expand(r, root, 1, check=False).positions()]
        lines = {b[4] for b in boxes} & {b[2] for b in boxes}
        for y in sorted(lines, key=key):
            lo = sorted(((b[1], b[3]) for b in boxes if b[4] == y), key=lambda e: key(e[0]))
            hi = sorted(((b[1], b[3]) for b in boxes if b[2] == y), key=lambda e: key(e[0]))
            for run_lo in _runs(lo):
                run_hi = [e for e in hi if run_lo[0][0] <= e[0] and e[1] <= run_lo[-1][1]]
                if not run_hi or run_hi[0][0] != run_lo[0][0] or run_hi[-1][1] != run_lo[-1][1]:
                    continue
                if any(u[1] != v[0] for u, v in zip(run_hi, run_hi[1:])):
                    continue
                x0 = run_lo[0][0]
                a = tuple([K.zero] + [e[1] - x0 for e in run_lo])
                b = tuple([K.zero] + [e[1] - x0 for e in run_hi])
                seen.setdefault((a, b), InitialSegment(a[-1], a, b))
    return list(seen.values())


def _runs(intervals):
    out, cur = [], []
    for e in intervals:
        if cur and cur[-1][1] != e[0]:
            out.append(cur)
            cur = []
        cur.append(e)
    if cur:
        out.append(cur)
    return out


# -- SVG ----------------------------------------------------------------------

_PALETTE = ("#e6b35a", "#7aa6c2", "#9bc47a", "#d9828b", "#b39ddb", "#f2d388", "#80cbc4", "#bcaaa4")


def render_svg(p: Patch2D, style: Mapping | None = None) -> str:
    """SVG 1.1 drawing of the patch; y grows upward in tiling coordinates."""
    style = dict(style or {})
    scale = Fraction(str(style.get("scale", 40)))
    stroke = style.get("stroke", "#333333")
    stroke_width = style.get("stroke_width", 1)
    colors = dict(style.get("colors", {}))
    for i, lab in enumerate(sorted(p.rule.labels)):
        colors.setdefault(lab, _PALETTE[i % len(_PALETTE)])
    K = p.rule.field

    def num(a: AlgebraicNumber) -> Fraction:
        return K.embed(a, 1, 40).re.mid

    def fmt(x: Fraction) -> str:
        s = f"{float(x * scale):.9f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s

    W, H = (num(v) for v in p.support)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(W)}" height="{fmt(H)}" '
        f'viewBox="0 0 {fmt(W)} {fmt(H)}">',
        f'<g stroke="{stroke}" stroke-width="{stroke_width}">',
    ]
    for lab, x, y in p.positions():
        w, h = p.dims(lab)
        xf, yf, wf, hf = num(x), num(y), num(w), num(h)
        lines.append(
            f'<rect x="{fmt(xf)}" y="{fmt(H - yf - hf)}" width="{fmt(wf)}" height="{fmt(hf)}" '
            f'fill="{colors[lab]}"><title>{lab}</title></rect>'
        )
    lines.append("</g>")
    for mx, my in style.get("markers", ()):
        cx, cy = num(mx), num(my)
        lines.append(f'<circle cx="{fmt(cx)}" cy="{fmt(H - cy)}" r="4" fill="none" stroke="#c00000" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
