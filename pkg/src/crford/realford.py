"""Real hyperbolic Ford domains in the upper half-space model.

Moebius maps are 2x2 matrices of determinant one over a number field.  The
isometric sphere of g = [[a, b], [c, d]] has centre -d/c and radius 1/|c|.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import census
from .intervals import ComplexInterval, RealInterval
from .linalg import Matrix, PSL2Class, classify_psl2, fixed_points_boundary
from .numfield import (
    NFElement,
    NumberField,
    NumberFieldError,
    PrecisionExhausted,
    conjugation_closure,
    nf_sign_certify,
)
from .words import Word


class FixesInfinity(NumberFieldError):
    pass


class NotParabolic(NumberFieldError):
    pass


class NoCommonFixedPoint(NumberFieldError):
    pass


MoebiusMap = Matrix


@functools.lru_cache(maxsize=None)
def _closure(F: NumberField):
    return conjugation_closure(F)


def closed_field(F: NumberField):
    """(L, embed) with L closed under complex conjugation and F inside L."""
    if F.has_conjugation:
        return F, lambda v: v
    adj = _closure(F)
    return adj.field, adj.embedding


@dataclass(frozen=True)
class IsometricSphere:
    owner: Matrix
    center: NFElement
    radius_sq: NFElement | None  # exact, in a conjugation-closed field
    word: str = ""

    def center_box(self, bits: int = 64) -> ComplexInterval:
        g = self.owner
        return (-g[1, 1].embed(bits).with_prec(bits)) / g[1, 0].embed(bits).with_prec(bits)

    def radius_sq_box(self, bits: int = 64) -> RealInterval:
        return self.owner[1, 0].embed(bits).with_prec(bits).abs2().reciprocal()


def isometric_sphere(g: Matrix, word: str = "", exact_radius: bool = True) -> IsometricSphere:
    c, d = g[1, 0], g[1, 1]
    if c.is_zero():
        raise FixesInfinity("g fixes infinity")
    center = -d / c
    r2 = None
    if exact_radius:
        L, emb = closed_field(g.field)
        cc = emb(c)
        r2 = (cc * cc.conj()).inverse()
    return IsometricSphere(g, center, r2, word)


def extend_to_h3(g: Matrix, point):
    """Poincare extension of g to upper half-space, applied to (z, t).

    Exact when z, t are field elements in a conjugation-closed field; with
    ComplexInterval / RealInterval inputs the result is a certified enclosure.
    """
    z, t = point
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    if isinstance(z, NFElement):
        L = z.field
        a, b, c, d = (L.promote(v) for v in (a, b, c, d))
        t = L.promote(t) if isinstance(t, NFElement) else L(t)
        num = (a * z + b) * (c * z + d).conj() + a * c.conj() * t * t
        w = c * z + d
        den = w * w.conj() + c * c.conj() * t * t
        return num / den, t / den
    bits = z.prec
    A, B, C, D = (v.embed(bits).with_prec(bits) for v in (a, b, c, d))
    w = C * z + D
    t2 = t * t
    den = w.abs2() + C.abs2() * t2
    num = (A * z + B) * w.conjugate() + A * C.conjugate() * ComplexInterval(t2, RealInterval(0, 0, bits))
    inv = den.reciprocal()
    return num * ComplexInterval(inv, RealInterval(0, 0, bits)), t * inv


def cusp_shape(P1: Matrix, P2: Matrix) -> NFElement:
    """Ratio of translation lengths after moving the common fixed point to infinity."""
    for P in (P1, P2):
        if classify_psl2(P) != PSL2Class.PARABOLIC:
            raise NotParabolic("peripheral element is not parabolic")
    f1 = fixed_points_boundary(P1)[0]
    f2 = fixed_points_boundary(P2)[0]
    if isinstance(f1, str) or isinstance(f2, str):
        if f1 != f2:
            raise NoCommonFixedPoint("fixed points differ")
        Q1, Q2 = P1, P2
    else:
        if f1 != f2:
            raise NoCommonFixedPoint("fixed points differ")
        F = P1.field
        h = Matrix([[f1, -1], [1, 0]], F)
        hi = h.inverse()
        Q1, Q2 = hi * P1 * h, hi * P2 * h
    # ratio of the upper right entries of [[+-1, b], [0, +-1]]; the PSL(2) sign is not normalised
    return Q2[0, 1] / Q1[0, 1]


def census_cusp_shape(name: str) -> NFElement:
    rep = census.census(name)
    u, v = census.CUSP_PAIRS[name]
    return cusp_shape(rep.word(u), rep.word(v))


# ---------------------------------------------------------------------------
# partial Ford domains


@dataclass
class FordSetup:
    name: str
    generators: dict  # name -> Matrix (each det 1)
    cusp: tuple  # two parabolics fixing infinity

    @property
    def lattice(self) -> tuple:
        return cusp_lattice(self.cusp)


def cusp_lattice(cusp) -> tuple:
    """Translation lengths of two parabolics fixing infinity."""
    out = []
    for P in cusp:
        if not P[1, 0].is_zero():
            raise NumberFieldError("cusp element does not fix infinity")
        out.append(P[0, 1] / P[1, 1])
    return tuple(out)


def ford_setup(name: str) -> FordSetup:
    rep = census.census(name)
    F = rep.field
    if name == "m004":
        # move the fixed point 0 of s = x^2 y x^-1 to infinity
        h = Matrix([[0, -1], [1, 0]], F)
        s, t = rep.constants["s"], rep.constants["t"]
        P2 = rep.word(census.CUSP_PAIRS["m004"][1])
        conj = lambda M: h.inverse() * M * h
        gens = {"s": conj(s), "t": conj(t)}
        cusp = (conj(s), conj(P2))
    elif name == "m009":
        q = rep.constants["q"]
        qi = q.inverse()
        conj = lambda M: qi * M * q
        gens = {"x": conj(rep.x), "y": conj(rep.y)}
        u, v = census.CUSP_PAIRS["m009"]
        cusp = (conj(rep.word(u)), conj(rep.word(v)))
    elif name == "m015":
        x = rep.x
        xi = x.inverse()
        conj = lambda M: xi * M * x
        u, v = census.CUSP_PAIRS["m015"]
        gens = {"a": rep.constants["yx"], "b": rep.constants["xyx"]}
        cusp = (conj(rep.word(u)), conj(rep.word(v)))
    else:
        raise KeyError(name)
    return FordSetup(name, gens, cusp)


def _psl2_key(M: Matrix):
    """Canonical key up to sign."""
    for r in M.rows:
        for v in r:
            if not v.is_zero():
                first = next(n for n in v.nums if n)
                if first < 0:
                    return tuple(tuple((-x).nums + ((-x).den,) for x in row) for row in M.rows)
                return tuple(tuple(x.nums + (x.den,) for x in row) for row in M.rows)
    raise ValueError("zero matrix")


def enumerate_moebius(gens: dict, max_len: int):
    """Shortlex enumeration of words in gens and inverses, deduplicated up to sign."""
    letters = []
    for g in sorted(gens):
        letters.append(((g, 1), gens[g]))
        letters.append(((g, -1), gens[g].inverse()))
    F = next(iter(gens.values())).field
    ident = Matrix.identity(2, F)
    seen = {_psl2_key(ident)}
    out = []
    frontier = [(Word(), ident)]
    for _ in range(max_len):
        nxt = []
        for w, M in frontier:
            for (g, e), L in letters:
                if w.letters and w.letters[-1] == (g, -e):
                    continue
                N = M * L
                k = _psl2_key(N)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((Word(w.letters + ((g, e),)), N))
        out.extend(nxt)
        frontier = nxt
    return out


@dataclass
class _NumSphere:
    center: complex
    r2: float
    word: str
    matrix: Matrix
    shift: tuple = (0, 0)


@dataclass
class FordResult:
    name: str
    lattice: tuple
    visible: list  # list of IsometricSphere representatives modulo the lattice
    radii_sq: list  # distinct exact radius^2 values, sorted by size (descending)
    radius_classes: list  # numeric radii, descending
    depth_counts: dict = field(default_factory=dict)
    stable_from: int | None = None
    eisenstein: bool | None = None

    @property
    def distinct_radii(self) -> int:
        return len(self.radii_sq)


def _lattice_coords(z: complex, w1: complex, w2: complex):
    det = (w1.conjugate() * w2).imag
    a = (z.conjugate() * w2).imag / det
    b = (w1.conjugate() * z).imag / det
    return a, b


def _strictly_inside(top: _NumSphere, other: _NumSphere, shift: complex, exact_ctx) -> bool:
    """Is the highest point of ``top`` strictly inside ``other`` translated by ``shift``?"""
    dz = top.center - (other.center + shift)
    D = other.r2 - top.r2 - (dz.real ** 2 + dz.imag ** 2)
    scale = max(1.0, other.r2, abs(dz) ** 2)
    if D > 1e-9 * scale:
        return True
    if D < -1e-9 * scale:
        return False
    return exact_ctx(top, other)


def ford_domain(name: str, word_len: int, neighbours: int = 2) -> FordResult:
    setup = ford_setup(name)
    return partial_ford(setup.generators, setup.cusp, word_len, neighbours, name=name)


def partial_ford(gens, cusp, word_len: int, neighbours: int = 2, name: str = "") -> FordResult:
    """Visible isometric spheres among words of length <= word_len.

    ``gens`` is a dict (or list) of Moebius maps, ``cusp`` a pair of parabolics
    fixing infinity that generate the translation lattice.
    """
    if not isinstance(gens, dict):
        gens = {chr(ord("a") + i): g for i, g in enumerate(gens)}
    F = next(iter(gens.values())).field
    w1, w2 = cusp_lattice(cusp)
    w1c, w2c = complex(w1), complex(w2)
    L, emb = (None, None)

    def exact_ctx(top, other, _cache={}):
        nonlocal L, emb
        if L is None:
            L, emb = closed_field(F)
        # exact D = r2' - r2 - |z - z' - shift|^2 with the shift chosen numerically
        a, b = _lattice_coords(top.center - other.center, w1c, w2c)
        m, n = round(a), round(b)
        for dm in (-1, 0, 1):
            for dn in (-1, 0, 1):
                s = (m + dm) * w1 + (n + dn) * w2
                dz = emb(top.matrix[1, 1] / -top.matrix[1, 0] - (other.matrix[1, 1] / -other.matrix[1, 0]) - s)
                c1, c2 = emb(top.matrix[1, 0]), emb(other.matrix[1, 0])
                D = (c2 * c2.conj()).inverse() - (c1 * c1.conj()).inverse() - dz * dz.conj()
                try:
                    sg = nf_sign_certify(D)
                except PrecisionExhausted:
                    sg = 0  # conservative: keep
                if sg > 0:
                    return True
        return False

    depth_counts = {}
    all_words = enumerate_moebius(gens, word_len)
    spheres: list[_NumSphere] = []
    for w, M in all_words:
        c = M[1, 0]
        if c.is_zero():
            continue
        cb = c.embed(64)
        db = M[1, 1].embed(64)
        cz = complex(cb.mid())
        center = -complex(db.mid()) / cz
        r2 = 1.0 / abs(cz) ** 2
        a, b = _lattice_coords(center, w1c, w2c)
        k, l = math.floor(a + 1e-9), math.floor(b + 1e-9)
        center_red = center - k * w1c - l * w2c
        spheres.append(_NumSphere(center_red, r2, str(w), M, (k, l)))
    # deduplicate numerically, keeping the shortlex-first word
    uniq: dict = {}
    for s in spheres:
        key = (round(s.center.real, 7), round(s.center.imag, 7), round(s.r2, 7))
        uniq.setdefault(key, s)
    reps = list(uniq.values())

    def visible_among(cands):
        vis = []
        for s in cands:
            hidden = False
            for o in cands:
                if o.r2 <= s.r2 and o is not s:
                    continue
                for i in range(-neighbours, neighbours + 1):
                    for j in range(-neighbours, neighbours + 1):
                        if o is s and i == 0 and j == 0:
                            continue
                        shift = i * w1c + j * w2c
                        dz = s.center - (o.center + shift)
                        if abs(dz) > math.sqrt(o.r2) + 1e-9:
                            continue
                        if _strictly_inside(s, o, shift, exact_ctx):
                            hidden = True
                            break
                    if hidden:
                        break
                if hidden:
                    break
            if not hidden:
                vis.append(s)
        return vis

    visible = visible_among(reps)
    # depth bookkeeping (how many visible representatives at each depth)
    length_of = {}
    for w, M in all_words:
        length_of[str(w)] = len(w)
    for depth in range(1, word_len + 1):
        sub = [s for s in reps if length_of[s.word] <= depth]
        depth_counts[depth] = len(visible_among(sub)) if sub else 0
    stable = None
    for depth in range(word_len, 0, -1):
        if depth_counts[depth] == depth_counts[word_len]:
            stable = depth
        else:
            break

    # exact spheres and radius classes
    Lf, embf = closed_field(F)
    exact = []
    for s in visible:
        sph = isometric_sphere(s.matrix, s.word)
        k, l = s.shift
        exact.append(IsometricSphere(s.matrix, sph.center - k * w1 - l * w2, sph.radius_sq, s.word))
    classes: list = []
    for sp in sorted(exact, key=lambda e: -complex(e.radius_sq).real):
        if not any(sp.radius_sq == c for c in classes):
            classes.append(sp.radius_sq)
    radii = [math.sqrt(complex(c).real) for c in classes]
    res = FordResult(name, (w1, w2), exact, classes, radii, depth_counts, stable)
    if len(classes) == 1:
        res.eisenstein = eisenstein_centers([e.center for e in exact], (w1, w2))
    return res


def eisenstein_centers(centers: Sequence[NFElement], lattice=None) -> bool:
    """Do the centres form a translate of a rotated copy of Z[omega] with unit spacing?

    The test uses the centres together with their lattice translates: each
    difference from the first centre, divided by a unit-length difference u,
    must be m + n*omega with integers m, n.
    """
    if not centers:
        return False
    F = centers[0].field
    L, emb = closed_field(F)
    pts = [emb(c) for c in centers]
    if lattice is not None:
        base = list(pts)
        w1, w2 = (emb(v) for v in lattice)
        pts = [p + i * w1 + j * w2 for p in base for i in (-1, 0, 1) for j in (-1, 0, 1)]
    z0 = pts[0]
    u = None
    for p in pts[1:]:
        d = p - z0
        if (d * d.conj()).is_one():
            u = d
            break
    if u is None:
        return False
    omegas = [r for r in L.roots_of([L(1), L(1), L(1)]) if complex(r).imag > 0]
    if not omegas:
        return False
    om = omegas[0]
    for p in pts:
        w = (p - z0) / u
        n = (w - w.conj()) / (om - om.conj())
        m = w - n * om
        if not (n.is_rational() and m.is_rational()):
            return False
        if n.rational().denominator != 1 or m.rational().denominator != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# SVG


PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def emit_prism_svg(spheres: Sequence[IsometricSphere], lattice, path=None, size: int = 600,
                   copies: int = 1) -> str:
    """Top view: isometric circles and translates, plus the lattice parallelogram."""
    w1, w2 = (complex(v) for v in lattice)
    circles = []
    radii_sq = []
    for s in spheres:
        r2 = complex(s.radius_sq).real if s.radius_sq is not None else s.radius_sq_box().mid()
        cls = None
        for i, v in enumerate(radii_sq):
            if abs(v - r2) < 1e-9:
                cls = i
                break
        if cls is None:
            radii_sq.append(r2)
            cls = len(radii_sq) - 1
        c = complex(s.center)
        for i in range(-copies, copies + 1):
            for j in range(-copies, copies + 1):
                circles.append((c + i * w1 + j * w2, math.sqrt(r2), cls))
    corners = [0, w1, w1 + w2, w2]
    span = max(abs(w1), abs(w2), 1.0)
    lo_x, hi_x = min(p.real for p in corners) - span, max(p.real for p in corners) + span
    lo_y, hi_y = min(p.imag for p in corners) - span, max(p.imag for p in corners) + span
    scale = size / max(hi_x - lo_x, hi_y - lo_y)

    def tx(z: complex):
        return (z.real - lo_x) * scale, (hi_y - z.imag) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g fill="none" stroke-width="1.2">',
    ]
    for c, r, cls in sorted(circles, key=lambda t: (t[2], round(t[0].real, 9), round(t[0].imag, 9))):
        x, y = tx(c)
        if not (-r * scale <= x <= size + r * scale and -r * scale <= y <= size + r * scale):
            continue
        out.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{r * scale:.4f}" stroke="{PALETTE[cls % len(PALETTE)]}"/>')
    out.append("</g>")
    pts = " ".join("{:.4f},{:.4f}".format(*tx(p)) for p in corners)
    out.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="2" stroke-dasharray="6,4"/>')
    for i, r2 in enumerate(radii_sq):
        out.append(f'<text x="10" y="{20 + 16 * i}" font-size="12" fill="{PALETTE[i % len(PALETTE)]}">'
                   f'radius {math.sqrt(r2):.6f}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def lattice_equivalent(tau: NFElement, sigma: NFElement, bound: int = 2) -> bool:
    """Do <1, tau> and <1, sigma> span similar lattices?

    Searches integer matrices [[a, b], [c, d]] with determinant +-1 and
    entries bounded by ``bound`` for sigma = (a tau + b) / (c tau + d).
    """
    F = tau.field
    sigma = F.promote(sigma) if sigma.field is not F else sigma
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if abs(a * d - b * c) != 1:
                        continue
                    den = tau * c + d
                    if den.is_zero():
                        continue
                    if (tau * a + b) / den == sigma:
                        return True
    return False
