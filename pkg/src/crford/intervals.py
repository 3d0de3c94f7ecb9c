"""Outward-rounded dyadic interval arithmetic.

Endpoints are stored as integers scaled by ``2**-prec``.  Every operation
rounds the lower endpoint down and the upper endpoint up, so the true
value of any expression built from exact inputs is always enclosed.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class RealInterval:
    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: int, hi: int, prec: int):
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def from_rational(cls, x, prec: int) -> "RealInterval":
        x = Fraction(x)
        num = x.numerator << prec
        return cls(_floor_div(num, x.denominator), _ceil_div(num, x.denominator), prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int) -> "RealInterval":
        lo, hi = Fraction(lo), Fraction(hi)
        return cls(
            _floor_div(lo.numerator << prec, lo.denominator),
            _ceil_div(hi.numerator << prec, hi.denominator),
            prec,
        )

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            if other.prec != self.prec:
                return other.with_prec(self.prec)
            return other
        return RealInterval.from_rational(other, self.prec)

    def with_prec(self, prec: int) -> "RealInterval":
        if prec == self.prec:
            return self
        if prec > self.prec:
            s = prec - self.prec
            return RealInterval(self.lo << s, self.hi << s, prec)
        s = self.prec - prec
        return RealInterval(self.lo >> s, -((-self.hi) >> s), prec)

    # exact rational endpoints
    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def mid(self) -> float:
        return float(Fraction(self.lo + self.hi, 1 << (self.prec + 1)))

    def __float__(self) -> float:
        return self.mid()

    def __add__(self, other):
        o = self._coerce(other)
        return RealInterval(self.lo + o.lo, self.hi + o.hi, self.prec)

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        return RealInterval(self.lo - o.hi, self.hi - o.lo, self.prec)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealInterval(min(p) >> self.prec, -((-max(p)) >> self.prec), self.prec)

    __rmul__ = __mul__

    def square(self) -> "RealInterval":
        a, b = self.lo, self.hi
        if a >= 0:
            lo, hi = a * a, b * b
        elif b <= 0:
            lo, hi = b * b, a * a
        else:
            lo, hi = 0, max(a * a, b * b)
        return RealInterval(lo >> self.prec, -((-hi) >> self.prec), self.prec)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def reciprocal(self) -> "RealInterval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        one = 1 << (2 * self.prec)
        a, b = self.lo, self.hi
        return RealInterval(_floor_div(one, b), _ceil_div(one, a), self.prec)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def sqrt(self) -> "RealInterval":
        if self.hi < 0:
            raise ValueError("sqrt of negative interval")
        lo = max(self.lo, 0)
        slo = math.isqrt(lo << self.prec)
        shi = math.isqrt(self.hi << self.prec)
        if shi * shi != self.hi << self.prec:
            shi += 1
        return RealInterval(slo, shi, self.prec)

    def abs(self) -> "RealInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealInterval(0, max(-self.lo, self.hi), self.prec)

    def hull(self, other) -> "RealInterval":
        o = self._coerce(other)
        return RealInterval(min(self.lo, o.lo), max(self.hi, o.hi), self.prec)

    def intersects(self, other) -> bool:
        o = self._coerce(other)
        return self.lo <= o.hi and o.lo <= self.hi

    def subset_of(self, other) -> bool:
        o = self._coerce(other)
        return o.lo <= self.lo and self.hi <= o.hi

    def __lt__(self, other):
        """Certainly less: every point of self is below every point of other."""
        o = self._coerce(other)
        return self.hi < o.lo

    def __gt__(self, other):
        o = self._coerce(other)
        return self.lo > o.hi

    def sign(self):
        """Return -1, +1 or None when the interval straddles zero."""
        if self.hi < 0:
            return -1
        if self.lo > 0:
            return 1
        return None

    def __repr__(self):
        return f"[{float(self.lower):.17g}, {float(self.upper):.17g}]"


class ComplexInterval:
    """Axis-aligned rectangle ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealInterval, im: RealInterval):
        self.re = re
        self.im = im

    @property
    def prec(self) -> int:
        return self.re.prec

    @classmethod
    def from_rational(cls, re, im, prec: int) -> "ComplexInterval":
        return cls(RealInterval.from_rational(re, prec), RealInterval.from_rational(im, prec))

    @classmethod
    def from_box(cls, re_lo, re_hi, im_lo, im_hi, prec: int) -> "ComplexInterval":
        return cls(RealInterval.from_bounds(re_lo, re_hi, prec), RealInterval.from_bounds(im_lo, im_hi, prec))

    def _coerce(self, other) -> "ComplexInterval":
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, RealInterval):
            return ComplexInterval(other, RealInterval(0, 0, other.prec))
        if isinstance(other, complex):
            raise TypeError("floats are not exact; pass rationals")
        return ComplexInterval.from_rational(other, 0, self.prec)

    def with_prec(self, prec: int) -> "ComplexInterval":
        return ComplexInterval(self.re.with_prec(prec), self.im.with_prec(prec))

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return ComplexInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def abs2(self) -> RealInterval:
        return self.re.square() + self.im.square()

    def abs(self) -> RealInterval:
        return self.abs2().sqrt()

    def reciprocal(self) -> "ComplexInterval":
        n = self.abs2().reciprocal()
        return ComplexInterval(self.re * n, -self.im * n)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def intersects(self, other) -> bool:
        o = self._coerce(other)
        return self.re.intersects(o.re) and self.im.intersects(o.im)

    def subset_of(self, other) -> bool:
        o = self._coerce(other)
        return self.re.subset_of(o.re) and self.im.subset_of(o.im)

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def mid(self) -> complex:
        return complex(self.re.mid(), self.im.mid())

    def __complex__(self) -> complex:
        return self.mid()

    def __repr__(self):
        return f"({self.re!r} + i{self.im!r})"
