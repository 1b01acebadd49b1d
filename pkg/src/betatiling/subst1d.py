"""Symbolic substitutions and the one-dimensional tiling substitution they induce."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from . import _poly
from .field import (
    AlgebraicNumber,
    DegreeCapExceeded,
    NumberField,
    _numeric_roots,
    field_from_poly,
)

SQUAREFREE_DEGREE_CAP = 16


class SubstitutionError(ValueError):
    pass


class EmptyWord(SubstitutionError):
    pass


class NoPerronEigenvalue(SubstitutionError):
    pass


class AlphabetMismatch(SubstitutionError):
    pass


class MatrixClass(enum.Enum):
    PRIMITIVE = "primitive"
    IRREDUCIBLE_NOT_PRIMITIVE = "irreducible_not_primitive"
    REDUCIBLE = "reducible"


@dataclass(frozen=True)
class Substitution1D:
    alphabet: tuple[str, ...]
    rule: Mapping[str, tuple[str, ...]]
    matrix: tuple[tuple[int, ...], ...]
    field: NumberField
    heights: tuple[AlgebraicNumber, ...]

    @property
    def beta(self) -> AlgebraicNumber:
        return self.field.beta

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def height(self, symbol: str) -> AlgebraicNumber:
        return self.heights[self.index(symbol)]

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise AlphabetMismatch(f"symbol {symbol!r} not in alphabet {list(self.alphabet)}") from None

    def word_length(self, word: Sequence[str]) -> AlgebraicNumber:
        total = self.field.zero
        for k in word:
            total = total + self.height(k)
        return total

    def __hash__(self) -> int:
        return hash((self.alphabet, tuple(self.rule[a] for a in self.alphabet), self.field.poly))


def structure_matrix(alphabet: Sequence[str], rule: Mapping[str, Sequence[str]]) -> tuple[tuple[int, ...], ...]:
    pos = {a: i for i, a in enumerate(alphabet)}
    rows = []
    for a in alphabet:
        row = [0] * len(alphabet)
        for k in rule[a]:
            row[pos[k]] += 1
        rows.append(tuple(row))
    return tuple(rows)


def _perron_minpoly(matrix) -> tuple[list[int], tuple[Fraction, Fraction]]:
    """Minimal polynomial of the largest real eigenvalue of ``matrix``.

    Returns the polynomial and an isolating bracket for the eigenvalue.
    """
    chi = _poly.charpoly(matrix)
    fchi = _poly.to_fractions(chi)
    g = _poly.gcd(fchi, _poly.deriv(fchi))
    sqf = _poly.monic(_poly.divmod_(fchi, g)[0])
    assert all(c.denominator == 1 for c in sqf)
    sqf_int = [int(c) for c in sqf]
    n = len(sqf_int) - 1
    brackets = _poly.isolate_real_roots(sqf)
    if not brackets:
        raise NoPerronEigenvalue("structure matrix has no real eigenvalue")
    lo, hi = brackets[-1]
    while lo <= 1 <= hi and lo != hi:
        lo, hi = _poly.bisect_root(sqf, lo, hi)
    if not lo > 1:
        raise NoPerronEigenvalue("largest real eigenvalue is not > 1")
    if lo == hi:
        return [-int(lo), 1], (lo, hi)
    if n > SQUAREFREE_DEGREE_CAP:
        raise DegreeCapExceeded(f"squarefree characteristic polynomial has degree {n} > {SQUAREFREE_DEGREE_CAP}")
    dps = 30 + 3 * n + len(str(max(abs(c) for c in sqf_int))) * 2
    roots = _numeric_roots(sqf_int, dps)
    mid = (lo + hi) / 2
    with mpmath.workdps(dps):
        target = mpmath.mpf(mid.numerator) / mid.denominator
        bi = min(range(len(roots)), key=lambda i: abs(roots[i] - target))
        rest = [z for i, z in enumerate(roots) if i != bi]
        for k in range(1, n + 1):
            for subset in itertools.combinations(rest, k - 1):
                prod = [mpmath.mpc(1)]
                for z in (roots[bi],) + subset:
                    nxt = [mpmath.mpc(0)] * (len(prod) + 1)
                    for t, c in enumerate(prod):
                        nxt[t + 1] += c
                        nxt[t] -= c * z
                    prod = nxt
                if any(abs(c.imag) > 0.25 for c in prod):
                    continue
                cand = [int(mpmath.nint(c.real)) for c in prod]
                if _poly.divmod_(sqf, cand)[1]:
                    continue
                seq = _poly.sturm_sequence(cand)
                if _poly.count_roots(seq, lo, hi) == 1:
                    return cand, (lo, hi)
    raise AssertionError("no factor of the characteristic polynomial vanishes at the Perron root")


def _nullspace(rows: list[list[AlgebraicNumber]], zero: AlgebraicNumber) -> list[list[AlgebraicNumber]]:
    m = len(rows[0])
    a = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    one = zero + 1
    for fc in free:
        v = [zero] * m
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def build(
    alphabet: Sequence[str],
    rule: Mapping[str, Sequence[str]],
    heights: Sequence[AlgebraicNumber] | None = None,
) -> Substitution1D:
    """Build the substitution, its structure matrix and Perron data.

    ``heights`` may be supplied (e.g. the actual edge lengths of a 2D rule);
    they are then verified as a positive right eigenvector instead of solved.
    """
    alphabet = tuple(alphabet)
    if not alphabet:
        raise SubstitutionError("alphabet is empty")
    if len(set(alphabet)) != len(alphabet):
        raise SubstitutionError("alphabet has repeated symbols")
    extra = set(rule) - set(alphabet)
    if extra:
        raise AlphabetMismatch(f"rule given for unknown symbols {sorted(extra)}")
    words = {}
    for a in alphabet:
        if a not in rule:
            raise AlphabetMismatch(f"no rule for symbol {a!r}")
        w = tuple(rule[a])
        if not w:
            raise EmptyWord(f"rule for {a!r} is empty")
        bad = [k for k in w if k not in alphabet]
        if bad:
            raise AlphabetMismatch(f"rule for {a!r} uses unknown symbols {bad}")
        words[a] = w
    M = structure_matrix(alphabet, words)
    minpoly, _ = _perron_minpoly(M)
    K = field_from_poly(minpoly)
    beta = K.beta
    m = len(alphabet)

    if heights is not None:
        h = [AlgebraicNumber(K, x.coeffs) if isinstance(x, AlgebraicNumber) else K.rational(x) for x in heights]
        if len(h) != m:
            raise SubstitutionError(f"expected {m} heights, got {len(h)}")
    else:
        rows = [[K.rational(M[i][j]) - (beta if i == j else 0) for j in range(m)] for i in range(m)]
        basis = _nullspace(rows, K.zero)
        if not basis:
            raise NoPerronEigenvalue("beta is not an eigenvalue of the structure matrix")
        h = basis[0]
        for v in basis[1:]:
            h = [x + y for x, y in zip(h, v)]
        norm = h[-1] if h[-1] else next(x for x in h if x)
        h = [x / norm for x in h]
    for i in range(m):
        total = K.zero
        for j in range(m):
            if M[i][j]:
                total = total + h[j] * M[i][j]
        if total != beta * h[i]:
            raise NoPerronEigenvalue(f"heights are not a beta-eigenvector (row {alphabet[i]!r})")
    if not all(x.sign() > 0 for x in h):
        raise NoPerronEigenvalue("beta-eigenvector has non-positive entries")
    return Substitution1D(alphabet, words, M, K, tuple(h))


def from_json(data: Mapping) -> Substitution1D:
    """Parse ``{"alphabet": [...], "rules": {sym: [sym, ...]}}``."""
    allowed = {"alphabet", "rules"}
    unknown = set(data) - allowed
    if unknown:
        raise SubstitutionError(f"unknown fields {sorted(unknown)}")
    for key in allowed:
        if key not in data:
            raise SubstitutionError(f"missing field {key!r}")
    alphabet = data["alphabet"]
    rules = {k: list(v) for k, v in data["rules"].items()}
    return build(alphabet, rules)


def to_json(sub: Substitution1D) -> dict:
    return {"alphabet": list(sub.alphabet), "rules": {a: list(sub.rule[a]) for a in sub.alphabet}}


def classify_matrix(sub: Substitution1D | Sequence[Sequence[int]]) -> MatrixClass:
    M = sub.matrix if isinstance(sub, Substitution1D) else sub
    m = len(M)
    adj = [[M[i][j] > 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        seen = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for v in range(m):
                if adj[u][v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) < m:
            return MatrixClass.REDUCIBLE
    power = adj
    for _ in range((m - 1) ** 2 + 1):
        if all(all(row) for row in power):
            return MatrixClass.PRIMITIVE
        power = [[any(power[i][t] and adj[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
    return MatrixClass.IRREDUCIBLE_NOT_PRIMITIVE


@dataclass(frozen=True)
class Tile1D:
    symbol: str
    left: AlgebraicNumber
    right: AlgebraicNumber


@dataclass(frozen=True)
class Patch1D:
    """Tiles laid end to end from ``left``, one per symbol of ``word``."""

    sub: Substitution1D
    left: AlgebraicNumber
    word: tuple[str, ...]

    def __post_init__(self):
        for k in self.word:
            self.sub.index(k)

    @property
    def tiles(self) -> list[Tile1D]:
        out = []
        s = self.left
        for k in self.word:
            t = s + self.sub.height(k)
            out.append(Tile1D(k, s, t))
            s = t
        return out

    @property
    def support(self) -> tuple[AlgebraicNumber, AlgebraicNumber]:
        return self.left, self.left + self.sub.word_length(self.word)

    def translate(self, t: AlgebraicNumber) -> "Patch1D":
        return Patch1D(self.sub, self.left + t, self.word)


def patch(sub: Substitution1D, left, word: Sequence[str]) -> Patch1D:
    if not isinstance(left, AlgebraicNumber):
        left = sub.field.rational(left)
    return Patch1D(sub, left, tuple(word))


def substitute_patch(sub: Substitution1D, p: Patch1D) -> Patch1D:
    """S(pi): inflate by beta and replace every tile by the patch of its image."""
    if p.sub is not sub and p.sub != sub:
        raise AlphabetMismatch("patch was built over a different substitution")
    word: list[str] = []
    for k in p.word:
        word.extend(sub.rule[k])
    return Patch1D(sub, p.left * sub.beta, tuple(word))
