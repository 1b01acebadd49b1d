"""Closed intervals and complex boxes with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction((x.numerator * s) // x.denominator, s)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(-((-x.numerator * s) // x.denominator), s)


def sqrt_upper(x: Fraction, bits: int = 80) -> Fraction:
    """Rational r >= sqrt(x), within 2**-bits of it."""
    if x < 0:
        raise ValueError("sqrt of negative")
    s = 1 << bits
    n = x.numerator * s * s
    d = x.denominator
    r = isqrt(n // d)
    while r * r * d < n:
        r += 1
    return Fraction(r, s)


def sqrt_lower(x: Fraction, bits: int = 80) -> Fraction:
    """Rational r <= sqrt(x), within 2**-bits of it."""
    if x < 0:
        raise ValueError("sqrt of negative")
    s = 1 << bits
    r = isqrt((x.numerator * s * s) // x.denominator)
    return Fraction(r, s)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @staticmethod
    def point(x) -> "Interval":
        x = Fraction(x)
        return Interval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    def scale(self, c: Fraction) -> "Interval":
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def outward(self, bits: int) -> "Interval":
        """Round endpoints outward to dyadics, keeping numbers small."""
        return Interval(_dyadic_floor(self.lo, bits), _dyadic_ceil(self.hi, bits))

    def __float__(self) -> float:
        return float(self.mid)


@dataclass(frozen=True)
class Box:
    """Axis-aligned complex box ``re x im``; real quantities have ``im == [0, 0]``."""

    re: Interval
    im: Interval

    @staticmethod
    def real(iv: Interval) -> "Box":
        return Box(iv, Interval.point(0))

    @staticmethod
    def point(x) -> "Box":
        return Box(Interval.point(x), Interval.point(0))

    @property
    def is_real(self) -> bool:
        return self.im.lo == 0 and self.im.hi == 0

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def __add__(self, other: "Box") -> "Box":
        return Box(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Box") -> "Box":
        return Box(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "Box") -> "Box":
        if self.is_real and other.is_real:
            return Box.real(self.re * other.re)
        return Box(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def scale(self, c: Fraction) -> "Box":
        return Box(self.re.scale(c), self.im.scale(c))

    def abs2(self) -> Interval:
        """Enclosure of |z|**2."""
        return self.re.square() + self.im.square()

    def abs(self, bits: int = 80) -> Interval:
        """Enclosure of |z| with rational endpoints."""
        if self.is_real:
            return self.re.abs()
        a2 = self.abs2()
        return Interval(sqrt_lower(a2.lo, bits), sqrt_upper(a2.hi, bits))

    def overlaps(self, other: "Box") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def outward(self, bits: int) -> "Box":
        if self.is_real:
            return Box.real(self.re.outward(bits))
        return Box(self.re.outward(bits), self.im.outward(bits))

    def __complex__(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))
