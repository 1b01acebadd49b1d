"""Generalized beta-transformations F(x) = beta*x - y_j on x in [x_{j-1}, x_j)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import AlgebraicNumber, FieldMismatch, NumberField
from .subst1d import Substitution1D


class OutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class SymbolInterval:
    symbol: str
    start: AlgebraicNumber
    end: AlgebraicNumber


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    branch: int | None = None


@dataclass(frozen=True)
class BetaTransform:
    """A right-continuous piecewise map of slope beta on E = [0, B).

    Branches are 1-based: branch ``j`` is ``[breakpoints[j-1], breakpoints[j])``
    with translate ``translates[j-1]``.  Maps built from a substitution also
    carry the symbol whose interval ``E_k`` each branch maps onto.
    """

    field: NumberField
    B: AlgebraicNumber
    breakpoints: tuple[AlgebraicNumber, ...]
    translates: tuple[AlgebraicNumber, ...]
    branch_symbol: tuple[str, ...] | None = None
    symbol_intervals: tuple[SymbolInterval, ...] | None = None

    @property
    def beta(self) -> AlgebraicNumber:
        return self.field.beta

    @property
    def branches(self) -> int:
        return len(self.translates)

    def _check(self, x: AlgebraicNumber) -> AlgebraicNumber:
        if not isinstance(x, AlgebraicNumber):
            x = self.field.rational(x)
        elif x.field != self.field:
            raise FieldMismatch("point belongs to another field")
        if x.sign() < 0 or x >= self.B:
            raise OutOfDomain(f"{x} is not in [0, {self.B})")
        return x

    def branch_index(self, x: AlgebraicNumber) -> int:
        """1-based branch j with x_{j-1} <= x < x_j (binary search, exact compares)."""
        x = self._check(x)
        lo, hi = 0, len(self.breakpoints) - 1  # invariant: bp[lo] <= x < bp[hi]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.breakpoints[mid] <= x:
                lo = mid
            else:
                hi = mid
        return lo + 1

    def __call__(self, x: AlgebraicNumber) -> AlgebraicNumber:
        return eval_map(self, x)

    def symbol_at(self, x: AlgebraicNumber) -> str | None:
        """Symbol of the interval E_k containing ``x`` (None for standalone maps)."""
        if self.symbol_intervals is None:
            return None
        x = self._check(x)
        for si in self.symbol_intervals:
            if si.start <= x < si.end:
                return si.symbol
        raise AssertionError("symbol intervals do not cover E")


def from_substitution(sub: Substitution1D) -> BetaTransform:
    """The map F recording which central tile S(T) contains 0."""
    K = sub.field
    beta = sub.beta
    inv_beta = beta.inverse()
    g = [K.zero]
    for h in sub.heights:
        g.append(g[-1] + h)
    start = {a: g[i] for i, a in enumerate(sub.alphabet)}
    intervals = tuple(SymbolInterval(a, g[i], g[i + 1]) for i, a in enumerate(sub.alphabet))
    breakpoints = [K.zero]
    translates = []
    symbols = []
    for j, a in enumerate(sub.alphabet):
        c = K.zero
        for k in sub.rule[a]:
            # branch [g + c/beta, g + (c + h_k)/beta) maps onto E_k
            translates.append(beta * g[j] + c - start[k])
            symbols.append(k)
            c = c + sub.height(k)
            breakpoints.append(g[j] + c * inv_beta)
        assert breakpoints[-1] == g[j + 1]
    return BetaTransform(K, g[-1], tuple(breakpoints), tuple(translates), tuple(symbols), intervals)


def from_data(
    field: NumberField,
    breakpoints: Sequence[AlgebraicNumber],
    translates: Sequence[AlgebraicNumber],
) -> BetaTransform:
    """A standalone map from user data; call ``validate`` before relying on it."""
    bp = tuple(breakpoints)
    if len(bp) != len(translates) + 1:
        raise ValueError("need exactly one more breakpoint than translates")
    return BetaTransform(field, bp[-1], bp, tuple(translates))


def eval_map(t: BetaTransform, x: AlgebraicNumber) -> AlgebraicNumber:
    j = t.branch_index(x)
    if not isinstance(x, AlgebraicNumber):
        x = t.field.rational(x)
    return x * t.beta - t.translates[j - 1]


def central_tile_step(t: BetaTransform, x: AlgebraicNumber) -> tuple[str | None, AlgebraicNumber]:
    """Symbol k and offset y with S-bar(E_j - x) = E_k - y."""
    j = t.branch_index(x)
    if not isinstance(x, AlgebraicNumber):
        x = t.field.rational(x)
    y = x * t.beta - t.translates[j - 1]
    if t.branch_symbol is not None:
        return t.branch_symbol[j - 1], y
    return t.symbol_at(y), y


def validate(t: BetaTransform) -> list[Violation]:
    """All invariant violations of ``t``; an empty list means valid."""
    out: list[Violation] = []
    K = t.field
    beta = K.beta
    bp = t.breakpoints
    try:
        if len(bp) != len(t.translates) + 1 or not t.translates:
            out.append(Violation("shape", "need l >= 1 branches and l + 1 breakpoints"))
            return out
        for v in list(bp) + list(t.translates) + [t.B]:
            if v.field != K:
                out.append(Violation("field", f"{v} is not in {K}"))
                return out
        if not bp[0].is_zero():
            out.append(Violation("start", "x_0 must be 0"))
        if bp[-1] != t.B:
            out.append(Violation("end", "x_l must equal B"))
        for j in range(1, len(bp)):
            if not bp[j - 1] < bp[j]:
                out.append(Violation("order", f"breakpoints not strictly increasing at x_{j}", j))
        for j in range(1, len(bp)):
            y = t.translates[j - 1]
            lo = beta * bp[j - 1] - y
            hi = beta * bp[j] - y
            if lo.sign() < 0 or hi > t.B:
                out.append(Violation("image", f"β I_{j} − y_{j} ⊄ E", j))
            if beta * (bp[j] - bp[j - 1]) > t.B:
                out.append(Violation("length", f"β|I_{j}| > B", j))
            if t.branch_symbol is not None and t.symbol_intervals is not None:
                k = t.branch_symbol[j - 1]
                si = next((s for s in t.symbol_intervals if s.symbol == k), None)
                if si is None or lo != si.start or hi != si.end:
                    out.append(Violation("onto", f"branch {j} does not map onto E_{k}", j))
    except Exception as exc:  # validation reports, never raises
        out.append(Violation("error", f"{type(exc).__name__}: {exc}"))
    return out


def to_report(t: BetaTransform, digits: int = 12) -> dict:
    def lit(v: AlgebraicNumber) -> dict:
        return {"exact": v.to_literal(), "approx": v.approx(digits)}

    rep = {
        "polynomial": list(t.field.poly),
        "B": lit(t.B),
        "breakpoints": [lit(x) for x in t.breakpoints],
        "translates": [lit(y) for y in t.translates],
    }
    if t.branch_symbol is not None:
        rep["branch_symbols"] = list(t.branch_symbol)
    if t.symbol_intervals is not None:
        rep["symbol_intervals"] = [
            {"symbol": s.symbol, "start": lit(s.start), "end": lit(s.end)} for s in t.symbol_intervals
        ]
    return rep
