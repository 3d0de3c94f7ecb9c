"""Exact arithmetic in number fields Q(theta) with a certified complex embedding.

A field is given by a monic irreducible integer polynomial (coefficients in
ascending order, constant term first) and an approximate root that picks
the embedding.  Elements are dense coefficient vectors in the power basis,
stored as integer numerators over one common positive denominator.

Polynomials are always passed as coefficient lists in ascending order.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .intervals import ComplexInterval, RealInterval

START_PRECISION = 128
MAX_PRECISION = 16384


class NumberFieldError(Exception):
    pass


class RejectReducible(NumberFieldError):
    pass


class RejectAmbiguousRoot(NumberFieldError):
    pass


class RejectDegenerate(NumberFieldError):
    """Linear minimal polynomials; use ``RATIONALS`` instead."""


class DivisionByZero(NumberFieldError, ZeroDivisionError):
    pass


class NotReal(NumberFieldError):
    pass


class PrecisionExhausted(NumberFieldError):
    pass


class ExtensionFailure(NumberFieldError):
    pass


class FieldMismatch(NumberFieldError, TypeError):
    pass


# ---------------------------------------------------------------------------
# root isolation


def _gaussian_scaled(coeffs, A, B, w):
    n = len(coeffs) - 1
    acc_re, acc_im = 0, 0
    pr, pi = 1, 0
    for k, c in enumerate(coeffs):
        f = c << (w * (n - k))
        acc_re += f * pr
        acc_im += f * pi
        pr, pi = pr * A - pi * B, pr * B + pi * A
    return acc_re, acc_im


def _ceil_sqrt(num: int, den: int, w: int) -> int:
    """Smallest integer R with (R / 2**w)**2 >= num / den."""
    # R >= sqrt(num * 4^w / den)
    q = -((-(num << (2 * w))) // den)
    r = math.isqrt(q)
    if r * r < q:
        r += 1
    return r


class _RootDisc:
    """Disc {|z - (A + iB)/2^w| <= R/2^w} containing exactly one root."""

    __slots__ = ("A", "B", "R", "w")

    def __init__(self, A, B, R, w):
        self.A, self.B, self.R, self.w = A, B, R, w

    def center(self) -> complex:
        return complex(float(Fraction(self.A, 1 << self.w)), float(Fraction(self.B, 1 << self.w)))

    def box(self) -> ComplexInterval:
        w = self.w
        re = RealInterval(self.A - self.R, self.A + self.R, w)
        im = RealInterval(self.B - self.R, self.B + self.R, w)
        return ComplexInterval(re, im)

    def conj(self) -> "_RootDisc":
        return _RootDisc(self.A, -self.B, self.R, self.w)

    def contains_box(self, box: ComplexInterval) -> bool:
        box = box.with_prec(max(box.prec, self.w))
        p = box.prec
        s = p - self.w
        A, B, R = self.A << s, self.B << s, self.R << s
        dx = max(abs(box.re.lo - A), abs(box.re.hi - A))
        dy = max(abs(box.im.lo - B), abs(box.im.hi - B))
        return dx * dx + dy * dy <= R * R


def _isolate_all(coeffs: Sequence[int], bits: int) -> list[_RootDisc]:
    """Certified pairwise-disjoint discs, one per root, radius < 2**-bits."""
    n = len(coeffs) - 1
    deriv = [k * coeffs[k] for k in range(1, n + 1)]
    work = bits + 32
    for _ in range(8):
        with mpmath.workprec(work):
            try:
                roots = mpmath.polyroots(
                    list(reversed(coeffs)), maxsteps=100 + 4 * work, extraprec=work
                )
            except mpmath.libmp.NoConvergence:
                work *= 2
                continue
            if n == 1:
                roots = [roots] if not isinstance(roots, list) else roots
            w = work
            discs = []
            ok = True
            for z in roots:
                z = mpmath.mpc(z)
                A = int(mpmath.nint(z.real * mpmath.mpf(2) ** w))
                B = int(mpmath.nint(z.imag * mpmath.mpf(2) ** w))
                pr, pim = _gaussian_scaled(coeffs, A, B, w)
                dr, dim = _gaussian_scaled(deriv, A, B, w)
                dd = dr * dr + dim * dim
                if dd == 0:
                    ok = False
                    break
                # root within n |p/p'| = n |P| / (|P'| 2^w)
                num = n * n * (pr * pr + pim * pim)
                den = dd << (2 * w)
                R = _ceil_sqrt(num, den, w) + 1
                discs.append(_RootDisc(A, B, R, w))
        if not ok:
            work *= 2
            continue
        limit = 1 << (w - bits)
        if any(d.R >= limit for d in discs):
            work *= 2
            continue
        disjoint = True
        for i in range(n):
            for j in range(i + 1, n):
                a, b = discs[i], discs[j]
                dx, dy = a.A - b.A, a.B - b.B
                rr = a.R + b.R
                if dx * dx + dy * dy <= rr * rr:
                    disjoint = False
                    break
            if not disjoint:
                break
        if disjoint:
            return discs
        work *= 2
    raise PrecisionExhausted(f"root isolation failed at {work} bits")


# ---------------------------------------------------------------------------
# polynomial helpers over Q (lists of Fractions, ascending)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod_q(a: list, b: list):
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    a = _trim(a)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        _trim(a)
    return _trim(q), a


def _poly_xgcd_q(a: list, b: list):
    """Return (g, s) with s*a = g mod b, g = gcd(a, b) made monic."""
    r0, r1 = _trim([Fraction(x) for x in b]), _trim([Fraction(x) for x in a])
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod_q(r0, r1)
        r0, r1 = r1, r
        qs = _poly_mul_q(q, s1)
        s2 = [Fraction(0)] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            s2[i] += c
        for i, c in enumerate(qs):
            s2[i] -= c
        s0, s1 = s1, _trim(s2)
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0]


def _poly_mul_q(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _is_irreducible(coeffs: Sequence[int]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(coeffs)), x, domain="QQ").is_irreducible


def _has_real_sign_change(coeffs: Sequence[int], disc: _RootDisc) -> bool:
    """True if p changes sign on the real segment through the disc centre."""
    w = disc.w
    lo, hi = disc.A - disc.R, disc.A + disc.R

    def sgn(X):
        re, _ = _gaussian_scaled(coeffs, X, 0, w)
        return (re > 0) - (re < 0)

    # the segment must lie inside the disc: take the centre's real part only
    # when the disc actually meets the real axis
    if abs(disc.B) > disc.R:
        return False
    half = math.isqrt(disc.R * disc.R - disc.B * disc.B)
    lo, hi = disc.A - half, disc.A + half
    a, b = sgn(lo), sgn(hi)
    return a * b < 0


# ---------------------------------------------------------------------------


class NumberField:
    """Q(theta) with theta a root of ``min_poly`` picked by ``approx_root``."""

    def __init__(self, min_poly: Sequence[int], approx_root: complex = 0, name: str = "theta",
                 *, _trivial: bool = False, _check: bool = True, _defer_conj: bool = False):
        coeffs = [int(c) for c in min_poly]
        if any(Fraction(c) != Fraction(c0) for c, c0 in zip(coeffs, min_poly)):
            raise NumberFieldError("min_poly must have integer coefficients")
        _trim(coeffs)
        if not coeffs or coeffs[-1] != 1:
            raise NumberFieldError("min_poly must be monic")
        self.degree = len(coeffs) - 1
        if self.degree < 1:
            raise NumberFieldError("min_poly must have positive degree")
        if self.degree == 1 and not _trivial:
            raise RejectDegenerate("degree-1 polynomial: use RATIONALS")
        if _check and self.degree > 1 and not _is_irreducible(coeffs):
            raise RejectReducible(f"{coeffs} is reducible over Q")
        self.min_poly = tuple(coeffs)
        self.name = name
        self._lock = threading.Lock()
        self._disc_cache: dict[int, list[_RootDisc]] = {}
        self._sym_domain = None
        # reduction table: theta^(d+k) for k = 0..d-2, integer coordinates
        d = self.degree
        table = []
        cur = [-c for c in coeffs[:-1]]  # theta^d
        for _ in range(max(d - 1, 1)):
            table.append(tuple(cur))
            # multiply by theta
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [cur[i] - top * coeffs[i] for i in range(d)]
        self._red = table
        self.subfields: dict[int, "FieldEmbedding"] = {}

        if self.degree == 1:
            self.root_index = 0
        else:
            discs = self._discs(START_PRECISION)
            approx_root = complex(approx_root)
            dists = sorted((abs(dd.center() - approx_root), i) for i, dd in enumerate(discs))
            (d1, i1), (d2, _) = dists[0], dists[1]
            if not d1 < d2 or math.isclose(d1, d2, rel_tol=1e-9):
                raise RejectAmbiguousRoot(f"{approx_root} is equidistant from two roots")
            self.root_index = i1
        self._approx = self._discs(START_PRECISION)[self.root_index].center() if self.degree > 1 else complex(-coeffs[0])
        self._conj_matrix = None
        self.conj_image = None
        if not _defer_conj:
            self._init_conjugation()

    # -- construction helpers ------------------------------------------------

    def __repr__(self):
        return f"NumberField({list(self.min_poly)}, ~{self._approx:.8g})"

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def _discs(self, bits: int) -> list[_RootDisc]:
        if self.degree == 1:
            c = -self.min_poly[0]
            return [_RootDisc(c << bits, 0, 0, bits)]
        with self._lock:
            if bits not in self._disc_cache:
                discs = _isolate_all(self.min_poly, bits)
                if self._disc_cache:
                    # keep the root order stable between precisions
                    ref = self._disc_cache[min(self._disc_cache)]
                    order = []
                    for r in ref:
                        c = r.center()
                        order.append(min(discs, key=lambda dd: abs(dd.center() - c)))
                    discs = order
                self._disc_cache[bits] = discs
            return self._disc_cache[bits]

    def root_disc(self, bits: int = START_PRECISION) -> _RootDisc:
        return self._discs(bits)[self.root_index]

    def all_root_discs(self, bits: int = START_PRECISION) -> list[_RootDisc]:
        return self._discs(bits)

    def theta_box(self, bits: int) -> ComplexInterval:
        """Certified box around theta of width below 2**(1-bits), nested in bits."""
        ladder = 16
        box = None
        while True:
            b = self.root_disc(ladder).box()
            box = b if box is None else _intersect(box, b)
            if ladder >= bits:
                return box
            ladder *= 2

    @property
    def approx(self) -> complex:
        return self._approx

    def _init_conjugation(self, candidate: "NFElement | None" = None):
        d = self.degree
        if candidate is not None:
            value = self.zero
            for c in reversed(self.min_poly):
                value = value * candidate + c
            if value.is_zero() and self.root_disc().conj().contains_box(candidate.embed(START_PRECISION)):
                self.conj_image = candidate
        elif d == 1:
            self.conj_image = self.gen
        else:
            disc = self.root_disc()
            if _has_real_sign_change(self.min_poly, disc):
                self.conj_image = self.gen
            else:
                target = disc.conj()
                for r in self.roots_of([Fraction(c) for c in self.min_poly]):
                    if target.contains_box(r.embed(START_PRECISION)):
                        self.conj_image = r
                        break
        if self.conj_image is None:
            return
        # matrix of the conjugation on the power basis
        cols = []
        p = self.one
        for _ in range(d):
            cols.append(p.coeffs)
            p = p * self.conj_image
        self._conj_matrix = cols

    @property
    def has_conjugation(self) -> bool:
        return self.conj_image is not None

    # -- elements ----------------------------------------------------------

    def __call__(self, value) -> "NFElement":
        if isinstance(value, NFElement):
            return self.promote(value)
        if isinstance(value, (list, tuple)):
            return NFElement.from_fractions(self, value)
        return NFElement.from_fractions(self, [value])

    @property
    def zero(self) -> "NFElement":
        return NFElement(self, (0,) * self.degree, 1)

    @property
    def one(self) -> "NFElement":
        return NFElement(self, (1,) + (0,) * (self.degree - 1), 1)

    @property
    def gen(self) -> "NFElement":
        if self.degree == 1:
            return NFElement(self, (-self.min_poly[0],), 1)
        return NFElement(self, (0, 1) + (0,) * (self.degree - 2), 1)

    def promote(self, x: "NFElement") -> "NFElement":
        if x.field is self:
            return x
        if x.field.degree == 1:
            return NFElement.from_fractions(self, [x.coeffs[0]])
        chain = self._embedding_from(x.field)
        if chain is None:
            raise FieldMismatch(f"no recorded embedding {x.field!r} -> {self!r}")
        return chain(x)

    def _embedding_from(self, src: "NumberField"):
        if id(src) in self.subfields:
            return self.subfields[id(src)]
        for emb in self.subfields.values():
            inner = emb.src._embedding_from(src)
            if inner is not None:
                return _Composite(inner, emb)
        return None

    # -- sympy interop -------------------------------------------------------

    def _sympy(self):
        with self._lock:
            if self._sym_domain is None:
                import sympy

                x = sympy.Symbol("x")
                expr = sum(c * x**i for i, c in enumerate(self.min_poly))
                dom = sympy.QQ.algebraic_field(sympy.CRootOf(expr, 0))
                mod = [Fraction(int(c.numerator), int(c.denominator)) for c in dom.mod.to_list()]
                if mod != [Fraction(c) for c in reversed(self.min_poly)]:
                    raise ExtensionFailure("sympy changed the primitive element")
                self._sym_domain = dom
            return self._sym_domain

    def _to_sym(self, a: "NFElement"):
        import sympy

        dom = self._sympy()
        return dom([sympy.QQ(c.numerator, c.denominator) for c in reversed(a.coeffs)])

    def _from_sym(self, v) -> "NFElement":
        lst = v.to_list() if hasattr(v, "to_list") else [v]
        vals = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(lst)]
        return NFElement.from_fractions(self, vals)

    def factor(self, poly: Sequence) -> list[tuple[list["NFElement"], int]]:
        """Factor a polynomial with coefficients in this field (ascending)."""
        import sympy

        coeffs = [self(c) if not isinstance(c, NFElement) else self.promote(c) for c in poly]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if self.degree == 1:
            y = sympy.Symbol("y")
            p = sympy.Poly([sympy.Rational(c.coeffs[0].numerator, c.coeffs[0].denominator)
                            for c in reversed(coeffs)], y, domain="QQ")
            out = []
            for f, m in p.factor_list()[1]:
                out.append(([self(Fraction(int(c.p), int(c.q))) for c in reversed(f.all_coeffs())], m))
            return out
        dom = self._sympy()
        y = sympy.Symbol("y")
        p = sympy.Poly.from_list([self._to_sym(c) for c in reversed(coeffs)], y, domain=dom)
        out = []
        for f, m in p.factor_list()[1]:
            out.append(([self._from_sym(c) for c in reversed(f.rep.to_list())], m))
        return out

    def roots_of(self, poly: Sequence) -> list["NFElement"]:
        """Roots lying in this field of a polynomial over it (ascending)."""
        roots = []
        for f, _ in self.factor(poly):
            if len(f) == 2:
                roots.append(-f[0] / f[1])
        return roots

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        box = self.theta_box(START_PRECISION)
        return {
            "min_poly": list(self.min_poly),
            "root_box": [str(box.re.lower), str(box.re.upper), str(box.im.lower), str(box.im.upper)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NumberField":
        if len(data["min_poly"]) == 2:
            return RATIONALS
        lo_re, hi_re, lo_im, hi_im = (Fraction(s) for s in data["root_box"])
        approx = complex(float((lo_re + hi_re) / 2), float((lo_im + hi_im) / 2))
        return cls(data["min_poly"], approx)


def _intersect(a: ComplexInterval, b: ComplexInterval) -> ComplexInterval:
    p = max(a.prec, b.prec)
    a, b = a.with_prec(p), b.with_prec(p)
    re = RealInterval(max(a.re.lo, b.re.lo), min(a.re.hi, b.re.hi), p)
    im = RealInterval(max(a.im.lo, b.im.lo), min(a.im.hi, b.im.hi), p)
    return ComplexInterval(re, im)


class NFElement:
    """Exact element sum(nums[i] * theta**i) / den of a NumberField."""

    __slots__ = ("field", "nums", "den", "_hash")

    def __init__(self, field: NumberField, nums: tuple, den: int = 1):
        g = math.gcd(den, *nums)
        if den < 0:
            g = -g
        if g != 1:
            nums = tuple(n // g for n in nums)
            den //= g
        self.field = field
        self.nums = nums
        self.den = den
        self._hash = None

    @classmethod
    def from_fractions(cls, field: NumberField, values: Iterable) -> "NFElement":
        vals = [Fraction(v) for v in values]
        if len(vals) > field.degree:
            # reduce a longer polynomial in theta
            acc = field.zero
            p = field.one
            for v in vals:
                acc = acc + p * v
                p = p * field.gen
            return acc
        vals += [Fraction(0)] * (field.degree - len(vals))
        den = math.lcm(*(v.denominator for v in vals)) if vals else 1
        return cls(field, tuple(v.numerator * (den // v.denominator) for v in vals), den)

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(n, self.den) for n in self.nums)

    # -- coercion --------------------------------------------------------------

    def _lift(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            if other.field is self.field:
                return other
            if other.field.degree == 1:
                return NFElement.from_fractions(self.field, [other.coeffs[0]])
            if self.field.degree == 1:
                raise _Swap
            try:
                return self.field.promote(other)
            except FieldMismatch:
                if other.field._embedding_from(self.field) is not None:
                    raise _Swap
                raise
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return NFElement(self.field, (f.numerator,) + (0,) * (self.field.degree - 1), f.denominator)
        if isinstance(other, float) and other.is_integer():
            return self._lift(int(other))
        return NotImplemented

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        try:
            o = self._lift(other)
        except _Swap:
            return other.field.promote(self) + other
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return NFElement(self.field, tuple(a + b for a, b in zip(self.nums, o.nums)), self.den)
        return NFElement(
            self.field,
            tuple(a * o.den + b * self.den for a, b in zip(self.nums, o.nums)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except _Swap:
            return other.field.promote(self) - other
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except _Swap:
            return other.field.promote(self) * other
        if o is NotImplemented:
            return NotImplemented
        F = self.field
        d = F.degree
        a, b = self.nums, o.nums
        if d == 1:
            return NFElement(F, (a[0] * b[0],), self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        res = prod[:d]
        red = F._red
        for k in range(d - 1):
            c = prod[d + k]
            if c:
                row = red[k]
                for i in range(d):
                    res[i] += c * row[i]
        return NFElement(F, tuple(res), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero():
            raise DivisionByZero("division by exact zero")
        F = self.field
        if F.degree == 1:
            return NFElement(F, (self.den,), self.nums[0])
        g, s = _poly_xgcd_q(list(self.coeffs), list(F.min_poly))
        if len(g) != 1:
            raise NumberFieldError("element shares a factor with min_poly")
        return NFElement.from_fractions(F, s)

    def __truediv__(self, other):
        try:
            o = self._lift(other)
        except _Swap:
            return other.field.promote(self) / other
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by exact zero")
        if all(n == 0 for n in o.nums[1:]):
            return self * NFElement(self.field, (o.den,) + (0,) * (self.field.degree - 1), o.nums[0])
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_one(self) -> bool:
        return self.den == 1 and self.nums[0] == 1 and not any(self.nums[1:])

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.nums[0], self.den)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, NFElement) and other.field is not self.field:
            try:
                return (self - other).is_zero()
            except FieldMismatch:
                return False
        try:
            o = self._lift(other)
        except (FieldMismatch, _Swap):
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.den == o.den and self.nums == o.nums

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.nums, self.den))
        return self._hash

    # -- conjugation -----------------------------------------------------------

    def conj(self) -> "NFElement":
        F = self.field
        if F._conj_matrix is None:
            raise NumberFieldError("field is not closed under complex conjugation")
        cols = F._conj_matrix
        d = F.degree
        acc = [Fraction(0)] * d
        for i, n in enumerate(self.nums):
            if n:
                for k, c in enumerate(cols[i]):
                    acc[k] += n * c
        return NFElement.from_fractions(F, [a / self.den for a in acc])

    def is_real(self) -> bool:
        return self.conj() == self

    def real_part(self) -> "NFElement":
        return (self + self.conj()) / 2

    def imag_part_times_i(self) -> "NFElement":
        """i * Im(self), i.e. (self - conj(self)) / 2."""
        return (self - self.conj()) / 2

    def abs2(self) -> "NFElement":
        return self * self.conj()

    # -- numerics --------------------------------------------------------------

    def embed(self, precision_bits: int = START_PRECISION) -> ComplexInterval:
        return nf_embed(self, precision_bits)

    def __complex__(self) -> complex:
        return self.embed(64).mid()

    def approx(self, dps: int = 30):
        box = self.embed(int(dps * 3.33) + 8)
        with mpmath.workdps(dps):
            re, im = box.re.lower + box.re.upper, box.im.lower + box.im.upper
            return mpmath.mpc(mpmath.mpf(re.numerator) / (2 * re.denominator),
                              mpmath.mpf(im.numerator) / (2 * im.denominator))

    def sign(self) -> int:
        return nf_sign_certify(self)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                s = str(c)
                if i == 0:
                    terms.append(s)
                elif i == 1:
                    terms.append(f"{s}*{self.field.name}")
                else:
                    terms.append(f"{s}*{self.field.name}^{i}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        out = self.field.to_json()
        out["coeffs"] = [str(c) for c in self.coeffs]
        return out

    @classmethod
    def from_json(cls, data: dict, field: NumberField | None = None) -> "NFElement":
        F = field if field is not None else NumberField.from_json(data)
        return NFElement.from_fractions(F, [Fraction(c) for c in data["coeffs"]])


class _Swap(Exception):
    """Internal: the other operand lives in the larger field."""


class FieldEmbedding:
    """Q-algebra map src -> dst sending src.gen to ``image``."""

    def __init__(self, src: NumberField, dst: NumberField, image: NFElement):
        self.src = src
        self.dst = dst
        self.image = image
        powers = []
        p = dst.one
        for _ in range(src.degree):
            powers.append(p)
            p = p * image
        self._powers = powers

    def __call__(self, x) -> NFElement:
        if not isinstance(x, NFElement):
            return self.dst(x)
        if x.field is self.dst:
            return x
        if x.field is not self.src:
            raise FieldMismatch("element is not in the embedding's source")
        out = self.dst.zero
        for c, p in zip(x.coeffs, self._powers):
            if c:
                out = out + p * c
        return out

    def preimage(self, y: NFElement) -> NFElement | None:
        """Element x of src with self(x) == y, or None when y is not in the image."""
        import sympy

        d, n = self.src.degree, self.dst.degree
        rows = [[p.coeffs[i] for p in self._powers] for i in range(n)]
        M = sympy.Matrix(n, d, lambda i, j: sympy.Rational(rows[i][j].numerator, rows[i][j].denominator))
        b = sympy.Matrix(n, 1, lambda i, _: sympy.Rational(y.coeffs[i].numerator, y.coeffs[i].denominator))
        try:
            sol, params = M.gauss_jordan_solve(b)
        except ValueError:
            return None
        if params.shape[0]:
            sol = sol.subs({p: 0 for p in params})
        x = NFElement.from_fractions(self.src, [Fraction(int(v.p), int(v.q)) for v in sol])
        return x if self(x) == y else None


class _Composite:
    def __init__(self, first, second):
        self.first, self.second = first, second
        self.src, self.dst = first.src, second.dst

    def __call__(self, x):
        return self.second(self.first(x))


RATIONALS = NumberField([0, 1], 0, name="q", _trivial=True, _check=False)


# ---------------------------------------------------------------------------
# public operations


def nf_create(min_poly: Sequence[int], approx_root: complex, name: str = "theta") -> NumberField:
    return NumberField(min_poly, approx_root, name)


def nf_embed(a: NFElement, precision_bits: int) -> ComplexInterval:
    """Certified complex box of width < 2**(1 - precision_bits) around a.

    Requests are evaluated on a power-of-two precision ladder and intersected,
    so the boxes for increasing precision are nested.
    """
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    if a.is_rational():
        q = Fraction(a.nums[0], a.den)
        return ComplexInterval.from_rational(q, 0, precision_bits + 2)
    target = Fraction(2, 1 << precision_bits)
    box = None
    ladder = 16
    while True:
        cur = _eval_at(a, ladder)
        box = cur if box is None else _intersect(box, cur)
        if ladder >= precision_bits and box.width < target:
            return box
        if ladder > 4 * MAX_PRECISION:
            raise PrecisionExhausted("embedding refinement did not converge")
        ladder *= 2


def _eval_at(a: NFElement, bits: int) -> ComplexInterval:
    F = a.field
    guard = bits + 8 * F.degree + int(max((abs(n).bit_length() for n in a.nums), default=0)) + 16
    t = F.theta_box(guard).with_prec(guard)
    acc = ComplexInterval.from_rational(0, 0, guard)
    for c in reversed(a.coeffs):
        acc = acc * t + ComplexInterval.from_rational(c, 0, guard)
    return acc


def nf_sign_certify(a: NFElement) -> int:
    """Sign of a real element: -1, 0 or 1.  Raises NotReal / PrecisionExhausted."""
    if a.is_zero():
        return 0
    if a.is_rational():
        return 1 if a.nums[0] > 0 else -1
    if not a.is_real():
        raise NotReal(f"{a!r} is not fixed by complex conjugation")
    bits = START_PRECISION
    while bits <= MAX_PRECISION:
        s = a.embed(bits).re.sign()
        if s is not None:
            return s
        bits *= 2
    raise PrecisionExhausted(f"sign undecided at {MAX_PRECISION} bits")


def nf_arith(a, b, op: str) -> NFElement:
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class Adjunction:
    """Result of nf_adjoin: the new field, the embedding of the old field, and
    the adjoined root as an element of the new field."""

    def __init__(self, field: NumberField, embedding, root: NFElement, shift: int = 0, scale: int = 1):
        self.field = field
        self.embedding = embedding
        self.root = root
        self.shift = shift  # the new generator is scale * (root + shift * old generator)
        self.scale = scale

    def __iter__(self):
        return iter((self.field, self.embedding, self.root))


def _identity_embedding(F: NumberField):
    return FieldEmbedding(F, F, F.gen)


def nf_adjoin(field: NumberField, poly: Sequence, approx_root: complex, name: str = "psi",
              max_shift: int = 12, defer_conjugation: bool = False) -> Adjunction:
    """Adjoin the root of ``poly`` (ascending, coefficients in ``field``) nearest
    ``approx_root``.  Collapses the tower to an absolute field."""
    K = field
    coeffs = [c if isinstance(c, NFElement) else K(c) for c in poly]
    coeffs = [K.promote(c) for c in coeffs]
    approx_root = complex(approx_root)

    # numeric roots of the embedded polynomial, to decide which root is meant
    with mpmath.workprec(256):
        emb = [c.approx(60) for c in coeffs]
        while emb and emb[-1] == 0:
            emb.pop()
        num_roots = mpmath.polyroots(list(reversed(emb)), maxsteps=400, extraprec=256) if len(emb) > 2 \
            else [-emb[0] / emb[1]]
        num_roots = [complex(r) for r in (num_roots if isinstance(num_roots, list) else [num_roots])]
    num_roots.sort(key=lambda r: abs(r - approx_root))
    if len(num_roots) > 1 and math.isclose(abs(num_roots[0] - approx_root), abs(num_roots[1] - approx_root),
                                            rel_tol=1e-9, abs_tol=1e-30):
        raise RejectAmbiguousRoot("approximate root is ambiguous")
    eta0 = num_roots[0]
    sep = min((abs(r - eta0) for r in num_roots[1:]), default=1.0)

    factors = K.factor(coeffs)
    # root already in the field?
    for f, _ in factors:
        if len(f) == 2:
            r = -f[0] / f[1]
            if abs(complex(r) - eta0) < sep / 4:
                return Adjunction(K, _identity_embedding(K), r)
    # pick the irreducible factor carrying the requested root
    best = None
    for f, _ in factors:
        with mpmath.workprec(256):
            val = abs(mpmath.polyval([c.approx(60) for c in reversed(f)], eta0))
        if best is None or val < best[0]:
            best = (val, f)
    F_poly = best[1]
    lead = F_poly[-1]
    F_poly = [c / lead for c in F_poly]
    e = len(F_poly) - 1
    d = K.degree
    n = d * e
    if n > 16:
        raise ExtensionFailure(f"absolute degree {n} exceeds cap 16 (base {d}, relative {e})")

    # tower elements: list of e coefficients in K (power basis in eta)
    def tmul(x, y):
        out = [K.zero] * (2 * e - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[i + j] = out[i + j] + a * b
        for k in range(2 * e - 2, e - 1, -1):
            c = out[k]
            if c:
                for i in range(e):
                    out[k - e + i] = out[k - e + i] - c * F_poly[i]
                out[k] = K.zero
        return out[:e]

    def flat(x):
        v = []
        for b in x:
            v.extend(b.coeffs)
        # ordering: index = b*d + a for theta^a eta^b
        return v

    eta_t = [K.zero] * e
    if e > 1:
        eta_t[1] = K.one
    else:
        eta_t[0] = -F_poly[0]
    theta_t = [K.gen] + [K.zero] * (e - 1)
    import sympy

    shifts = [0]
    for k in range(1, max_shift + 1):
        shifts += [k, -k]
    for k in shifts:
        psi_t = [eta_t[i] + (theta_t[i] * k) for i in range(e)]
        pows = []
        cur = [K.one] + [K.zero] * (e - 1)
        for _ in range(n + 1):
            pows.append(flat(cur))
            cur = tmul(cur, psi_t)
        M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(pows[j][i].numerator, pows[j][i].denominator))
        if M.rank() < n:
            continue
        rhs = sympy.Matrix(n, 1, lambda i, _: sympy.Rational(pows[n][i].numerator, pows[n][i].denominator))
        c = M.LUsolve(rhs)
        minp = [-Fraction(int(v.p), int(v.q)) for v in c] + [Fraction(1)]
        tvec = flat(theta_t)
        tsol = M.LUsolve(sympy.Matrix(n, 1, lambda i, _: sympy.Rational(tvec[i].numerator, tvec[i].denominator)))
        theta_in_psi = [Fraction(int(v.p), int(v.q)) for v in tsol]
        # make the generator integral:  psi' = D psi
        D = 1
        for i, ci in enumerate(minp[:-1]):
            D = math.lcm(D, ci.denominator)
        int_poly = [int(minp[i] * D ** (n - i)) for i in range(n + 1)]
        approx = D * (eta0 + k * K.approx)
        try:
            L = NumberField(int_poly, approx, name=name, _defer_conj=defer_conjugation)
        except RejectAmbiguousRoot as exc:
            raise ExtensionFailure(f"could not separate the new embedding: {exc}")
        psi = L.gen / D
        theta_img = L.zero
        p = L.one
        for cf in theta_in_psi:
            theta_img = theta_img + p * cf
            p = p * psi
        eta_img = psi - theta_img * k
        # certify that the chosen embedding restricts to the one of K
        if K.degree > 1 and not K.root_disc().contains_box(theta_img.embed(START_PRECISION)):
            raise ExtensionFailure("embedding of the base field does not match")
        embedding = FieldEmbedding(K, L, theta_img)
        L.subfields[id(K)] = embedding
        check = L.zero
        pe = L.one
        for cf in F_poly:
            check = check + embedding(cf) * pe
            pe = pe * eta_img
        if not check.is_zero():
            raise ExtensionFailure("adjoined element does not satisfy its polynomial")
        return Adjunction(L, embedding, eta_img, shift=k, scale=D)
    raise ExtensionFailure(f"no primitive element eta + k*theta with |k| <= {max_shift} "
                           f"(base degree {d}, relative degree {e})")


def conjugation_closure(field: NumberField) -> Adjunction:
    """Smallest extension (by one adjunction) closed under complex conjugation."""
    if field.has_conjugation:
        return Adjunction(field, _identity_embedding(field), field.gen)
    m = [field(c) for c in field.min_poly]
    # divide min_poly by (x - theta)
    rem = m[:]
    quot = [field.zero] * (len(m) - 1)
    for k in range(len(m) - 1, 0, -1):
        c = rem[k]
        quot[k - 1] = c
        rem[k - 1] = rem[k - 1] + c * field.gen
    adj = nf_adjoin(field, quot, field.approx.conjugate(), name=field.name + "c", defer_conjugation=True)
    L = adj.field
    if L is not field:
        # conjugation swaps the old generator and the adjoined root
        theta = adj.embedding(field.gen)
        L._init_conjugation(adj.scale * (theta + adj.root * adj.shift))
        if not L.has_conjugation:
            L._init_conjugation()
    if not adj.field.has_conjugation:
        raise ExtensionFailure("closure under conjugation needs more than one adjunction")
    return adj


def sqrt_element(field: NumberField, a, approx: complex) -> Adjunction:
    """Adjoin (or find) a square root of ``a`` near ``approx``."""
    a = field(a) if not isinstance(a, NFElement) else field.promote(a)
    return nf_adjoin(field, [-a, field.zero, field.one], approx)


def field_from_poly(poly: Sequence, approx_root: complex, name: str = "theta"):
    """Field generated by the root near ``approx_root`` of a rational polynomial.

    The polynomial may be non-monic with rational coefficients; the field is
    built on an integral multiple of the root.  Returns (field, root element).
    """
    q = [Fraction(c) for c in poly]
    _trim(q)
    n = len(q) - 1
    lead = q[-1]
    q = [c / lead for c in q]
    D = 1
    for c in q[:-1]:
        D = math.lcm(D, c.denominator)
    # y = D * x is a root of the monic polynomial sum q_i D^(n-i) y^i
    monic = [q[i] * D ** (n - i) for i in range(n + 1)]
    # reduce D while integrality persists is not attempted; D is small here
    ints = [int(c) for c in monic]
    if any(Fraction(i) != c for i, c in zip(ints, monic)):
        raise NumberFieldError("failed to make the polynomial integral")
    if n == 1:
        return RATIONALS, RATIONALS(Fraction(-ints[0]) / D)
    F = NumberField(ints, complex(approx_root) * D, name)
    return F, F.gen / D


def find_or_adjoin(field: NumberField, poly: Sequence, approx_root: complex):
    """Root of a rational polynomial near ``approx_root``; extends ``field`` if needed.

    Returns (field, element).  The returned field is ``field`` itself when the
    root already lies in it.
    """
    import mpmath

    coeffs = [field(Fraction(c)) for c in poly]
    roots = field.roots_of(coeffs)
    with mpmath.workdps(40):
        num = mpmath.polyroots([mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
                                for c in reversed(poly)], maxsteps=200, extraprec=100) if len(poly) > 2 \
            else [-mpmath.mpf(Fraction(poly[0]).numerator) / Fraction(poly[0]).denominator
                  * Fraction(poly[1]).denominator / Fraction(poly[1]).numerator]
        num = [complex(r) for r in (num if isinstance(num, list) else [num])]
    target = min(num, key=lambda r: abs(r - approx_root))
    sep = min((abs(r - target) for r in num if r is not target), default=1.0)
    matches = [r for r in roots if abs(complex(r) - target) < sep / 3]
    if matches:
        return field, matches[0]
    adj = nf_adjoin(field, coeffs, target)
    return adj.field, adj.root
