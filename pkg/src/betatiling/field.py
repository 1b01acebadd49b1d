"""Exact arithmetic in Q(beta) for a real algebraic integer beta > 1.

Elements are stored as rational coefficient vectors in the power basis
``1, beta, ..., beta**(d-1)``.  The same vector is the lattice point used by
the lifted map (``phi`` is the identity on this representation).  Real and
complex embeddings are evaluated on certified enclosures of the roots of the
minimal polynomial: real roots are isolated with Sturm sequences and refined
by exact bisection, non-real roots are certified with Smith's disc-inclusion
theorem from high-precision candidates.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from . import _poly
from ._interval import Box, Interval, sqrt_upper

DEFAULT_DEGREE_CAP = 8
DEFAULT_BOUNDARY_CAP_BITS = 256


class FieldError(ValueError):
    """Base class for invalid field input."""


class NotMonic(FieldError):
    pass


class Reducible(FieldError):
    def __init__(self, factor: Sequence[int]):
        super().__init__(f"polynomial has the nontrivial factor {list(factor)}")
        self.factor = list(factor)


class NoPerronRoot(FieldError):
    pass


class NotSquarefree(FieldError):
    pass


class DegreeCapExceeded(FieldError):
    pass


class FieldMismatch(ValueError):
    pass


class BadIndex(IndexError):
    pass


# ---------------------------------------------------------------------------
# root enclosures


class RealRoot:
    """A real root of ``poly`` held as a shrinking sign-change bracket."""

    is_real = True

    def __init__(self, poly: Sequence[Fraction], lo: Fraction, hi: Fraction):
        self._poly = list(poly)
        self._lo = lo
        self._hi = hi

    def interval(self, bits: int) -> Interval:
        target = Fraction(1, 1 << bits)
        lo, hi = self._lo, self._hi
        while hi - lo > target:
            lo, hi = _poly.bisect_root(self._poly, lo, hi)
        if hi - lo < self._hi - self._lo:
            self._lo, self._hi = lo, hi
        return Interval(lo, hi)

    def box(self, bits: int) -> Box:
        return Box.real(self.interval(bits))

    def approx(self) -> complex:
        return complex(float(self.interval(60).mid), 0.0)


class ComplexRoot:
    """A non-real root; enclosures are produced by its owning field."""

    is_real = False

    def __init__(self, owner: "NumberField", slot: int, upper_half: bool):
        self._owner = owner
        self._slot = slot
        self.upper_half = upper_half

    def box(self, bits: int) -> Box:
        return self._owner._complex_boxes(bits)[self._slot]

    def approx(self) -> complex:
        return complex(self.box(60))


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    return Fraction(man) * (Fraction(2) ** exp) if exp >= 0 else Fraction(man, 1 << -exp)


def _round_dyadic(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(round(x * s), s)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv_abs2(num, den) -> Fraction:
    """|num / den|**2 for complex rationals given as pairs."""
    return (num[0] ** 2 + num[1] ** 2) / (den[0] ** 2 + den[1] ** 2)


def _ceval(p: Sequence, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _numeric_roots(poly: Sequence[int], dps: int) -> list:
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c) for c in reversed(poly)]
        roots = mpmath.polyroots(coeffs, maxsteps=200 + 4 * dps, extraprec=2 * dps)
        if not isinstance(roots, list):
            roots = [roots]
        polished = []
        f = lambda z: mpmath.polyval(coeffs, z)
        dp = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
        for z in roots:
            for _ in range(4):
                d = mpmath.polyval(dp, z)
                if d == 0:
                    break
                z = z - f(z) / d
            polished.append(mpmath.mpc(z))
        return polished


# ---------------------------------------------------------------------------
# the field


class NumberField:
    """Q(beta) for beta the largest real root of a monic irreducible ``poly``.

    ``poly`` is an integer list, constant term first.  ``roots[0]`` is beta;
    ``roots[1:]`` are the Galois conjugates beta_2..beta_d (real ones first,
    in decreasing order, then complex pairs with the upper-half member first).
    Conjugate indices in the public API are 1-based, so index 1 is beta.
    """

    def __init__(self, poly: Sequence[int], *, degree_cap: int = DEFAULT_DEGREE_CAP):
        poly = list(poly)
        if not poly or any(not isinstance(c, int) or isinstance(c, bool) for c in poly):
            raise NotMonic("polynomial coefficients must be integers")
        poly = _poly.trim(poly)
        if len(poly) < 2:
            raise NotMonic("polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise NotMonic(f"leading coefficient is {poly[-1]}, expected 1")
        self.poly: tuple[int, ...] = tuple(poly)
        self.degree = len(poly) - 1
        d = self.degree
        if d > degree_cap:
            raise DegreeCapExceeded(f"degree {d} exceeds the cap {degree_cap}")
        fpoly = _poly.to_fractions(poly)
        self._fpoly = fpoly
        if _poly.degree(_poly.gcd(fpoly, _poly.deriv(fpoly))) > 0:
            raise NotSquarefree(f"{list(poly)} has a repeated root")
        if d > 1:
            factor = _find_factor(self.poly)
            if factor is not None:
                raise Reducible(factor)

        brackets = _poly.isolate_real_roots(fpoly)
        if not brackets:
            raise NoPerronRoot("polynomial has no real root")
        reals = [RealRoot(fpoly, lo, hi) for lo, hi in brackets]
        beta = reals[-1]
        if not _largest_root_exceeds_one(fpoly, brackets[-1]):
            raise NoPerronRoot("largest real root is not > 1")
        others: list = list(reversed(reals[:-1]))
        n_complex = d - len(reals)
        self._complex_cache: dict[int, list[Box]] = {}
        self._complex_slots = n_complex
        if n_complex:
            approx = _numeric_roots(self.poly, 40)
            upper = sorted((z for z in approx if z.imag > 0), key=lambda z: (-abs(z), -z.real))
            upper = upper[: n_complex // 2]
            self._complex_seed = upper
            slot = 0
            for _ in upper:
                others.append(ComplexRoot(self, slot, True))
                others.append(ComplexRoot(self, slot + 1, False))
                slot += 2
        self.roots: tuple = tuple([beta] + others)
        g = poly[:-1]
        self.companion: tuple[tuple[int, ...], ...] = tuple(
            tuple((1 if i == j + 1 else 0) if j < d - 1 else -g[i] for j in range(d)) for i in range(d)
        )
        self._power_tables: dict = {}
        if n_complex:
            self._complex_boxes(64)

    # -- elements ---------------------------------------------------------

    def __call__(self, coeffs: Iterable) -> "AlgebraicNumber":
        return AlgebraicNumber(self, coeffs)

    def rational(self, x) -> "AlgebraicNumber":
        return AlgebraicNumber(self, [x])

    @property
    def zero(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, [])

    @property
    def one(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, [1])

    @property
    def beta(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return AlgebraicNumber(self, [-self.poly[0]])
        return AlgebraicNumber(self, [0, 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and other.poly == self.poly

    def __hash__(self) -> int:
        return hash(("NumberField", self.poly))

    def __repr__(self) -> str:
        return f"NumberField({list(self.poly)})"

    def poly_str(self, var: str = "x") -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.poly[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            term = body + mono
            sign = "-" if c < 0 else "+"
            terms.append((sign, term))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, term in terms[1:]:
            out += f" {sign} {term}"
        return out

    # -- root enclosures --------------------------------------------------

    def root_box(self, i: int, bits: int) -> Box:
        """Certified box of width <= 2**-bits around root ``i`` (1-based)."""
        if not 1 <= i <= self.degree:
            raise BadIndex(f"root index {i} outside 1..{self.degree}")
        return self.roots[i - 1].box(bits)

    def beta_interval(self, bits: int) -> Interval:
        return self.roots[0].interval(bits)

    def is_real_root(self, i: int) -> bool:
        if not 1 <= i <= self.degree:
            raise BadIndex(f"root index {i} outside 1..{self.degree}")
        return self.roots[i - 1].is_real

    def representative_conjugates(self) -> list[int]:
        """Conjugate indices 2..d with one member of each complex pair."""
        return [i for i in range(2, self.degree + 1) if self.roots[i - 1].is_real or self.roots[i - 1].upper_half]

    def _complex_boxes(self, bits: int) -> list[Box]:
        for b, boxes in self._complex_cache.items():
            if b >= bits:
                return boxes
        work = bits
        while True:
            boxes = self._certify_complex(work)
            if boxes is not None and all(bx.width <= Fraction(1, 1 << bits) for bx in boxes):
                self._complex_cache[bits] = boxes
                return boxes
            work *= 2
            if work > 1 << 16:
                raise RuntimeError("complex root certification failed")

    def _certify_complex(self, bits: int) -> list[Box] | None:
        d = self.degree
        dps = int(bits * 0.31) + 30
        approx = _numeric_roots(self.poly, dps)
        seeds = self._complex_seed
        upper = []
        for s in seeds:
            upper.append(min((z for z in approx if z.imag > 0), key=lambda z: abs(z - s)))
        rb = bits + 24
        centers = []
        for r in self.roots:
            if r.is_real:
                centers.append((r.interval(rb).mid, Fraction(0)))
        for z in upper:
            c = (_round_dyadic(_mpf_to_fraction(z.real), rb), _round_dyadic(_mpf_to_fraction(z.imag), rb))
            centers.append(c)
            centers.append((c[0], -c[1]))
        if len(centers) != d:
            return None
        radii = []
        for i, zi in enumerate(centers):
            num = _ceval(self._fpoly, zi)
            den = (Fraction(1), Fraction(0))
            for j, zj in enumerate(centers):
                if j != i:
                    den = _cmul(den, (zi[0] - zj[0], zi[1] - zj[1]))
            if den == (0, 0):
                return None
            radii.append(sqrt_upper(d * d * _cdiv_abs2(num, den), rb))
        n_real = d - self._complex_slots
        for i in range(n_real, d):
            zi, ri = centers[i], radii[i]
            if not abs(zi[1]) > ri:
                return None
            for j in range(d):
                if j == i:
                    continue
                zj, rj = centers[j], radii[j]
                dist2 = (zi[0] - zj[0]) ** 2 + (zi[1] - zj[1]) ** 2
                if not dist2 > (ri + rj) ** 2:
                    return None
        boxes = []
        for i in range(n_real, d):
            (x, y), r = centers[i], radii[i]
            boxes.append(Box(Interval(x - r, x + r), Interval(y - r, y + r)))
        return boxes

    # -- embeddings ---------------------------------------------------------

    def _power_table(self, i: int, bits: int):
        """Integer bounds L_k, U_k with beta_i**k in [L_k, U_k] / 2**S."""
        key = (i, bits)
        tab = self._power_tables.get(key)
        if tab is None:
            iv = self.roots[i - 1].interval(bits)
            shift = bits + 16
            scale = 1 << shift
            pw = Interval.point(1)
            los, his = [], []
            for _ in range(self.degree):
                lo, hi = pw.lo * scale, pw.hi * scale
                los.append(lo.numerator // lo.denominator)
                his.append(-((-hi.numerator) // hi.denominator))
                pw = (pw * iv).outward(shift)
            tab = (los, his)
            self._power_tables[key] = tab
        return tab

    def real_sign(self, a: "AlgebraicNumber", i: int = 1) -> int:
        """Exact sign of the i-th embedding of ``a``; root ``i`` must be real."""
        if not self.roots[i - 1].is_real:
            raise BadIndex(f"root {i} is not real")
        if a.is_zero():
            return 0
        den = 1
        for c in a.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in a.coeffs]
        bits = 64
        while True:
            los, his = self._power_table(i, bits)
            lo = sum(n * (los[k] if n > 0 else his[k]) for k, n in enumerate(ints))
            hi = sum(n * (his[k] if n > 0 else los[k]) for k, n in enumerate(ints))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
            if bits > 1 << 18:
                raise RuntimeError("sign not resolved; nonzero element evaluated to 0?")

    def embed(self, a: "AlgebraicNumber", i: int, bits: int) -> Box:
        """Certified box of width <= 2**-bits around psi_i(a) = sum a_k beta_i**k."""
        if not 1 <= i <= self.degree:
            raise BadIndex(f"conjugate index {i} outside 1..{self.degree}")
        if a.field != self:
            raise FieldMismatch("element belongs to another field")
        target = Fraction(1, 1 << bits)
        rbits = bits + 4 + self.degree * 4
        while True:
            z = self.roots[i - 1].box(rbits)
            acc = Box.point(0)
            for c in reversed(a.coeffs):
                acc = (acc * z + Box.point(c)).outward(rbits + 8)
            if acc.width <= target:
                return acc
            rbits += max(8, bits // 2)

    def conjugate_enclosure(self, a: "AlgebraicNumber", i: int, precision: int = 64) -> Box:
        if not 2 <= i <= self.degree:
            raise BadIndex(f"conjugate index {i} outside 2..{self.degree}")
        return self.embed(a, i, precision)

    def abs_enclosure(self, a: "AlgebraicNumber", i: int, bits: int = 64) -> Interval:
        """Enclosure of |psi_i(a)| of width about 2**-bits."""
        return self.embed(a, i, bits + 2).abs(bits + 4)

    def compare_abs(self, a: "AlgebraicNumber", i: int, bound, *, cap_bits: int = 4096) -> int | None:
        """Certified sign of |psi_i(a)| - bound.

        ``bound`` is a rational or an AlgebraicNumber ``u`` standing for the
        real value psi_i(u).  Real embeddings are decided exactly; complex
        embeddings by refinement, returning ``None`` if ``cap_bits`` is hit.
        """
        if self.roots[i - 1].is_real:
            s = self.real_sign(a, i)
            mag = a if s >= 0 else -a
            u = bound if isinstance(bound, AlgebraicNumber) else self.rational(bound)
            return self.real_sign(mag - u, i)
        bits = 64
        while bits <= cap_bits:
            mag = self.abs_enclosure(a, i, bits)
            if isinstance(bound, AlgebraicNumber):
                b = self.embed(bound, i, bits).re
            else:
                b = Interval.point(bound)
            if mag.lo > b.hi:
                return 1
            if mag.hi < b.lo:
                return -1
            bits *= 2
        return None

    def compare(self, a: "AlgebraicNumber", b: "AlgebraicNumber") -> int:
        """-1, 0, 1 as a < b, a == b, a > b under the real embedding beta."""
        if a.field != self or b.field != self:
            raise FieldMismatch("comparison across fields")
        return self.real_sign(a - b, 1)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _largest_root_exceeds_one(fpoly, bracket) -> bool:
    lo, hi = bracket
    while lo <= 1 <= hi and lo != hi:
        lo, hi = _poly.bisect_root(fpoly, lo, hi)
    return lo > 1


def _mignotte_bound(poly: Sequence[int]) -> int:
    from math import comb, isqrt

    d = len(poly) - 1
    norm = isqrt(sum(c * c for c in poly)) + 1
    return max(comb(d // 2, k) for k in range(d // 2 + 1)) * norm


def _find_factor(poly: Sequence[int]) -> list[int] | None:
    """Search for a nontrivial monic integer factor of a squarefree ``poly``.

    Candidate factors are products of subsets of high-precision roots with
    coefficients rounded to integers; each candidate is verified by exact
    division, so numerical error can only cost a missed candidate, which the
    precision choice (well above the Mignotte coefficient bound) rules out.
    """
    d = len(poly) - 1
    bound = _mignotte_bound(poly)
    dps = len(str(bound)) + 30 + 2 * d
    roots = _numeric_roots(poly, dps)
    fpoly = _poly.to_fractions(poly)
    with mpmath.workdps(dps):
        for k in range(1, d // 2 + 1):
            for subset in itertools.combinations(roots, k):
                prod = [mpmath.mpc(1)]
                for z in subset:
                    nxt = [mpmath.mpc(0)] * (len(prod) + 1)
                    for t, c in enumerate(prod):
                        nxt[t + 1] += c
                        nxt[t] -= c * z
                    prod = nxt
                if any(abs(c.imag) > mpmath.mpf("0.25") for c in prod):
                    continue
                cand = [int(mpmath.nint(c.real)) for c in prod]
                if any(abs(c) > bound for c in cand):
                    continue
                q, r = _poly.divmod_(fpoly, cand)
                if not r:
                    return cand
    return None


@functools.lru_cache(maxsize=None)
def _cached_field(poly: tuple[int, ...]) -> NumberField:
    return NumberField(poly)


def field_from_poly(coeffs: Sequence[int]) -> NumberField:
    """Validated number field; identical polynomials share one instance."""
    coeffs = list(coeffs)
    if any(not isinstance(c, int) or isinstance(c, bool) for c in coeffs):
        raise NotMonic("polynomial coefficients must be integers")
    return _cached_field(tuple(_poly.trim(coeffs)))


# ---------------------------------------------------------------------------
# elements


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class AlgebraicNumber:
    """Immutable element w_0 + w_1 beta + ... + w_{d-1} beta**(d-1)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        d = field.degree
        if len(cs) > d:
            if any(cs[d:]):
                raise ValueError(f"expected at most {d} coefficients, got {len(cs)}")
            cs = cs[:d]
        cs += [Fraction(0)] * (d - len(cs))
        self.field = field
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # construction helpers
    @classmethod
    def from_literal(cls, field: NumberField, literal: Sequence) -> "AlgebraicNumber":
        """Parse ``["p/q", ...]`` (ints and int strings accepted too)."""
        if isinstance(literal, (str, int)):
            literal = [literal]
        if len(literal) != field.degree:
            raise ValueError(f"algebraic literal needs {field.degree} entries, got {len(literal)}")
        return cls(field, [Fraction(str(c)) for c in literal])

    def to_literal(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    def _coerce(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise FieldMismatch("operands belong to different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return AlgebraicNumber(self.field, [other])
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return AlgebraicNumber(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return AlgebraicNumber(self.field, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        g = self.field.poly
        # x**d = -(g_0 + ... + g_{d-1} x**(d-1)), applied from the top down
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for j in range(d):
                    if g[j]:
                        prod[k - d + j] -= c * g[j]
        return AlgebraicNumber(self.field, prod[:d])

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(beta)")
        p = _poly.to_fractions(self.field.poly)
        a = _poly.trim(list(self.coeffs))
        # extended Euclid: track s with s*a == r (mod p)
        r0, r1 = p, a
        s0, s1 = [], [Fraction(1)]
        while _poly.degree(r1) > 0:
            q, r = _poly.divmod_(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly.sub(s0, _poly.mul(q, s1))
        inv = _poly.scale(s1, 1 / r1[0])
        inv = _poly.divmod_(inv, p)[1]
        return AlgebraicNumber(self.field, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(beta)")
            return AlgebraicNumber(self.field, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_beta(self) -> "AlgebraicNumber":
        return self * self.field.beta

    # predicates and ordering
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def sign(self) -> int:
        return self.field.real_sign(self, 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.field.poly, self.coeffs))
        return self._hash

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare with {type(other).__name__}")
        return self.field.compare(self, o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # numerics (approximations only; never used for decisions)
    def enclosure(self, bits: int = 64) -> Interval:
        return self.field.embed(self, 1, bits).re

    def __float__(self) -> float:
        return float(self.enclosure(60).mid)

    def approx(self, digits: int = 12) -> str:
        iv = self.enclosure(int(digits * 3.33) + 8)
        with mpmath.workdps(digits + 10):
            val = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
            return mpmath.nstr(val, digits, strip_zeros=False, min_fixed=-1e9, max_fixed=1e9)

    def __repr__(self) -> str:
        return f"AlgebraicNumber({self})"

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("β" if k == 1 else f"β^{k}")
            if k == 0:
                body = str(c)
            elif c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = f"{c}{mono}" if c.denominator == 1 else f"({c}){mono}"
            parts.append(body)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


# ---------------------------------------------------------------------------
# Pisot test


class PisotKind(enum.Enum):
    PISOT = "pisot"
    NON_PISOT = "non_pisot"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class PisotVerdict:
    kind: PisotKind
    witness: int | None = None
    moduli: dict = dc_field(default_factory=dict)  # conjugate index -> Interval of |beta_i|

    @property
    def is_pisot(self) -> bool:
        return self.kind is PisotKind.PISOT


def conjugate_modulus(field: NumberField, i: int, bits: int) -> Interval:
    return field.root_box(i, bits).abs(bits + 4)


def is_pisot(field: NumberField, cap_bits: int = DEFAULT_BOUNDARY_CAP_BITS) -> PisotVerdict:
    """Classify beta as Pisot / non-Pisot, or report an undecided |beta_i| = 1 case."""
    moduli = {}
    undecided = []
    witness = None
    for i in range(2, field.degree + 1):
        bits = 32
        while True:
            m = conjugate_modulus(field, i, bits)
            if m.hi < 1 or m.lo > 1 or bits >= cap_bits:
                break
            bits = min(cap_bits, bits * 2)
        moduli[i] = m
        if m.lo > 1:
            if witness is None:
                witness = i
        elif not m.hi < 1:
            undecided.append(i)
    if witness is not None:
        return PisotVerdict(PisotKind.NON_PISOT, witness, moduli)
    if undecided:
        return PisotVerdict(PisotKind.BOUNDARY, undecided[0], moduli)
    return PisotVerdict(PisotKind.PISOT, None, moduli)
