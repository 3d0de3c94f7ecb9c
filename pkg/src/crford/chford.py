"""Ford domain of the (3,3,5; infinity) group in J-coordinates.

Conventions: <u, v> = v^* J u with J antidiagonal, p = p_inf = (0, 0, 1), and
the Heisenberg lift of (z, t) is Z = (1, z, -|z|^2/2 + i t).  Since the field
of the standardised group does not contain i, Heisenberg points store the
purely imaginary element i*t rather than t.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .certificate import Certificate, Status, combine_status
from .intervals import ComplexInterval, RealInterval
from .linalg import (
    Matrix,
    SU21Class,
    classify_su21,
    hermitian_cross,
    normalize_projective,
    nullspace,
    projective_scalar,
    standard_form_J,
)
from .numfield import NFElement, NumberFieldError, nf_sign_certify
from .realford import FixesInfinity
from .triangle import TriangleGroup, standard_335
from .words import Presentation, Word, enumerate_words, invert_triangle, projective_key, reduce_triangle

A_WORD = "2313"
A_INVERSE_WORD = "3132"
CORE_WORDS = ("32", "23", "2321", "1232", "12", "21", "232131", "131232", "32131232", "23213123")


class CycleOverflow(NumberFieldError):
    pass


class UnknownOrbitPoint(NumberFieldError):
    pass


# ---------------------------------------------------------------------------
# Heisenberg group


@dataclass(frozen=True)
class HeisenbergPoint:
    z: NFElement
    it: NFElement  # i * t, purely imaginary

    def __post_init__(self):
        if not (self.it + self.it.conj()).is_zero():
            raise ValueError("i*t must be purely imaginary")

    @classmethod
    def from_t(cls, z: NFElement, t, i: NFElement) -> "HeisenbergPoint":
        return cls(z, i * t)

    def lift(self) -> tuple:
        F = self.z.field
        return (F.one, self.z, -(self.z * self.z.conj()) / 2 + self.it)

    @property
    def t(self) -> float:
        return complex(self.it).imag

    def t_interval(self, bits: int = 64) -> RealInterval:
        return self.it.embed(bits).im


def heis_mul(a: HeisenbergPoint, b: HeisenbergPoint) -> HeisenbergPoint:
    # i Im(z conj(w)) = (z conj(w) - conj(z) w) / 2
    cross = (a.z * b.z.conj() - a.z.conj() * b.z) / 2
    return HeisenbergPoint(a.z + b.z, a.it + b.it + cross)


def a_action(p: HeisenbergPoint) -> HeisenbergPoint:
    """(z, t) -> (z + 1, t - Im z)."""
    return HeisenbergPoint(p.z + 1, p.it - (p.z - p.z.conj()) / 2)


def heis_from_vector(v: Sequence[NFElement]) -> HeisenbergPoint | None:
    """Heisenberg coordinates of a null vector, or None for p_inf."""
    if v[0].is_zero():
        return None
    z = v[1] / v[0]
    w = v[2] / v[0]
    return HeisenbergPoint(z, w + (z * z.conj()) / 2)


# ---------------------------------------------------------------------------
# face numbering


def face_index(j: int, k: int) -> int:
    if not 1 <= j <= 10:
        raise ValueError(f"core face index {j} out of range 1..10")
    if k == 0:
        return j
    if k > 0:
        return 10 * (2 * k - 1) + j
    return 20 * (-k) + j


def decode_face_index(n: int) -> tuple[int, int]:
    """Inverse of face_index: (j, k)."""
    if n < 1:
        raise ValueError("face indices are positive")
    m, j = (n - 1) // 10, (n - 1) % 10 + 1
    if m == 0:
        return j, 0
    if m % 2 == 1:
        return j, (m + 1) // 2
    return j, -(m // 2)


def _a_power(k: int) -> str:
    return A_WORD * k if k >= 0 else A_INVERSE_WORD * (-k)


def face_word(n: int) -> str:
    j, k = decode_face_index(n)
    return _a_power(k) + CORE_WORDS[j - 1]


def pairing_word(n: int) -> str:
    """Side pairing of face n = a^k b_j: the a^k-conjugate of g_j^-1."""
    j, k = decode_face_index(n)
    return reduce_triangle(_a_power(k) + invert_triangle(CORE_WORDS[j - 1]) + _a_power(-k))


# ---------------------------------------------------------------------------
# orbit points


def _vkey(v: Sequence[NFElement]):
    return tuple((x.nums, x.den) for x in normalize_projective(v))


def _p_inf(G: TriangleGroup) -> list:
    F = G.field
    return [F.zero, F.zero, F.one]


@dataclass
class OrbitPoint:
    word: str
    vector: tuple
    heis: HeisenbergPoint | None
    index: int | None = None

    @property
    def at_infinity(self) -> bool:
        return self.heis is None


def orbit_point(w: str, G: TriangleGroup | None = None, index: int | None = None) -> OrbitPoint:
    G = G or standard_335()
    M = G.evaluate(w)
    v = tuple(normalize_projective(M * _p_inf(G)))
    return OrbitPoint(w, v, heis_from_vector(v), index)


class OrbitTable:
    """Orbit points a^k g_j p for |k| <= depth, keyed by projective vector."""

    def __init__(self, G: TriangleGroup, depth: int = 6):
        self.G = G
        self.depth = depth
        a = G.evaluate(A_WORD)
        ai = a.inverse()
        self.by_key: dict = {_vkey(_p_inf(G)): 0}
        self.points: dict[int, OrbitPoint] = {}
        for j, w in enumerate(CORE_WORDS, start=1):
            base = G.evaluate(w) * _p_inf(G)
            for sign, step in ((1, a), (-1, ai)):
                vec = base
                for k in range(0, depth + 1):
                    if k > 0:
                        vec = step * vec
                    n = face_index(j, sign * k)
                    if n in self.points:
                        continue
                    v = tuple(normalize_projective(vec))
                    self.points[n] = OrbitPoint(face_word(n), v, heis_from_vector(v), n)
                    self.by_key[_vkey(v)] = n

    def index_of(self, v: Sequence[NFElement]) -> int:
        """Face index of an orbit point (0 stands for p itself)."""
        key = _vkey(v)
        if key not in self.by_key:
            raise UnknownOrbitPoint("vector is not one of the tabulated orbit points")
        return self.by_key[key]

    def vector(self, n: int) -> tuple:
        if n == 0:
            return tuple(_p_inf(self.G))
        return self.points[n].vector


_TABLES: dict = {}


def orbit_table(G: TriangleGroup | None = None, depth: int = 6) -> OrbitTable:
    G = G or standard_335()
    key = (id(G), depth)
    if key not in _TABLES:
        _TABLES[key] = OrbitTable(G, depth)
    return _TABLES[key]


# ---------------------------------------------------------------------------
# side pairings


SIDE_PAIRING_ROWS = (
    (2, 1), (3, 22), (4, 12), (5, 11), (7, 26), (8, 14), (9, 8), (11, 23), (12, 21),
    (13, 27), (15, 7), (17, 43), (18, 10), (19, 41), (21, 4), (22, 6), (24, 18), (32, 30),
)


def _projectively_equal_vectors(u, v) -> bool:
    return _vkey(u) == _vkey(v)


def verify_side_pairing_table(G: TriangleGroup | None = None, rows=SIDE_PAIRING_ROWS,
                              pairing: str = "23") -> Certificate:
    """Check that the pairing map sends orbit point #s to orbit point #t, for each row."""
    G = G or standard_335()
    table = orbit_table(G)
    M = G.evaluate(pairing)
    results = []
    for s, t in rows:
        image = M * list(table.vector(s))
        ok = _projectively_equal_vectors(image, table.vector(t))
        results.append({"source": s, "target": t, "status": "pass" if ok else "fail"})
    status = combine_status(r["status"] for r in results)
    return Certificate(
        claim=f"{pairing} maps the listed orbit points of b1 to those of b2",
        inputs={"pairing": pairing, "rows": [list(r) for r in rows]},
        status=status,
        witness=results,
    )


# ---------------------------------------------------------------------------
# ridge cycles and relations


_SHORT: dict = {}


def shortest_word(w: str, G: TriangleGroup | None = None, max_len: int = 10) -> str:
    """Shortlex-least triangle word for the same projective element as ``w``."""
    G = G or standard_335()
    key = (id(G), max_len)
    if key not in _SHORT:
        _SHORT[key] = {}
        for word, M in enumerate_words(G, max_len):
            _SHORT[key].setdefault(projective_key(M), word)
    found = _SHORT[key].get(projective_key(G.evaluate(w)))
    if found is None or len(found) > len(reduce_triangle(w)):
        return reduce_triangle(w)
    return found


def _word_power(w: str, n: int) -> str:
    return reduce_triangle(w * n)


def _cyclic_variants(w: str):
    for i in range(len(w)):
        yield w[i:] + w[:i]


def _cancel_cyclic(w: str) -> str:
    w = reduce_triangle(w)
    while len(w) > 1 and w[0] == w[-1]:
        w = reduce_triangle(w[1:-1])
    return w


def _basic_power(w: str):
    """(base, n) when w is a cyclic rotation of base^n with base in 12, 23, 13."""
    if not w:
        return ("", 0)
    for base in ("12", "21", "23", "32", "13", "31"):
        if len(w) % 2:
            continue
        n = len(w) // 2
        if any(r == base * n for r in _cyclic_variants(w)):
            canonical = {"21": "12", "32": "23", "31": "13"}.get(base, base)
            return (canonical, n)
    return None


def reduce_relation(w: str, max_states: int = 20000):
    """Rewrite a relator with {11, 22, 33 -> empty, 232 <-> 323} (cyclically)
    until it is a power of 12, 23 or 13.  Returns (base, exponent) or None."""
    start = _cancel_cyclic(w)
    seen = {start}
    queue = [start]
    limit = len(start) + 4
    while queue and len(seen) < max_states:
        cur = queue.pop(0)
        found = _basic_power(cur)
        if found is not None:
            return found
        for rot in set(_cyclic_variants(cur)) if cur else ():
            for i in range(len(rot) - 2):
                tri = rot[i:i + 3]
                if tri in ("232", "323"):
                    swap = "323" if tri == "232" else "232"
                    nxt = _cancel_cyclic(rot[:i] + swap + rot[i + 3:])
                    if len(nxt) <= limit and nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return None


_BRAID_MOVES = {"232": "323", "323": "232", "121": "212", "212": "121", "13131": "31313", "31313": "13131"}


def follows_from_basic_relations(w: str, max_states: int = 50000, slack: int = 4) -> bool:
    """Can w be rewritten to the empty word using (12)^3, (23)^3, (13)^5?

    Those relations, for involutions, amount to the moves 121 <-> 212,
    232 <-> 323 and 13131 <-> 31313 on cyclic words.
    """
    start = _cancel_cyclic(w)
    seen = {start}
    queue = [start]
    limit = len(start) + slack
    while queue and len(seen) < max_states:
        cur = queue.pop(0)
        if not cur:
            return True
        for rot in set(_cyclic_variants(cur)):
            for old, new in _BRAID_MOVES.items():
                i = rot.find(old)
                while i >= 0:
                    nxt = _cancel_cyclic(rot[:i] + new + rot[i + len(old):])
                    if len(nxt) <= limit and nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
                    i = rot.find(old, i + 1)
    return False


@dataclass
class RidgeCycle:
    ridge: tuple
    steps: list  # (pairing word, resulting ridge)
    closing_power: int  # power of a used to close the cycle
    transformation: str  # cycle transformation as a reduced triangle word
    order: int
    relator: str
    reduced: tuple | None
    certificate: Certificate


def _projective_order(M: Matrix, bound: int = 20) -> int | None:
    P = M
    for m in range(1, bound + 1):
        if projective_scalar(P) is not None:
            return m
        P = P * M
    return None


def trace_ridge_cycle(k: int, l: int, G: TriangleGroup | None = None, bound: int = 20) -> RidgeCycle:
    """Follow the ridge b_k cap b_l under side pairings, starting with the pairing of b_k.

    Each side pairing is written as its shortest triangle word, and the cycle
    is closed by the power of a relating the final ridge to the first one.
    """
    G = G or standard_335()
    table = orbit_table(G)
    state = (l, k)  # (face we arrived through, face whose pairing is applied next)
    start = state
    steps = []
    transform = ""
    for _ in range(bound):
        u, v = state
        g = shortest_word(pairing_word(v), G)
        M = G.evaluate(g)
        new_in = table.index_of(M * _p_inf(G))
        new_out = table.index_of(M * list(table.vector(u)))
        transform = reduce_triangle(g + transform)  # T_n ... T_1
        state = (new_in, new_out)
        steps.append((g, state))
        (ju, ku), (jv, kv) = decode_face_index(state[0]), decode_face_index(state[1])
        (su, lu), (sv, lv) = decode_face_index(start[0]), decode_face_index(start[1])
        if ju == su and jv == sv and ku - lu == kv - lv:
            shift = ku - lu
            T = reduce_triangle(_a_power(-shift) + transform)
            order = _projective_order(G.evaluate(T)) if T else 1
            if order is None:
                raise CycleOverflow("cycle transformation has no finite order")
            relator = _word_power(T, order) if T else ""
            ident = projective_scalar(G.evaluate(relator)) is not None if relator else True
            reduced = reduce_relation(relator)
            cert = Certificate(
                claim=f"ridge cycle of b{k} and b{l} closes",
                inputs={"ridge": [k, l]},
                status=Status.PASS if ident else Status.FAIL,
                witness={"steps": [[s, list(r)] for s, r in steps], "closing_power": shift,
                         "transformation": T, "order": order, "relator": relator,
                         "reduced": None if reduced is None else f"({reduced[0]})^{reduced[1]}"},
            )
            return RidgeCycle((k, l), steps, shift, T, order, relator, reduced, cert)
    raise CycleOverflow(f"ridge cycle of ({k}, {l}) did not close within {bound} steps")


def relation_is_identity(word: str, G: TriangleGroup | None = None) -> bool:
    G = G or standard_335()
    return projective_scalar(G.evaluate(reduce_triangle(word))) is not None


def presentation_of_gamma(G: TriangleGroup | None = None):
    """<x1, x2 | x1^3, x2^3, (x1 x2)^5> with x1 = 12, x2 = 23, and its certificate."""
    G = G or standard_335()
    x1, x2 = Word([("x1", 1)]), Word([("x2", 1)])
    pres = Presentation("gamma", ("x1", "x2"), [x1 ** 3, x2 ** 3, (x1 * x2) ** 5])
    images = {"x1": "12", "x2": "23"}
    rows = []
    for rel in pres.relators:
        text = "".join((images[g] if e == 1 else invert_triangle(images[g])) for g, e in rel.letters)
        rows.append({"relator": str(rel), "word": reduce_triangle(text),
                     "identity": relation_is_identity(text, G)})
    x1x2 = G.evaluate("1223")
    proper = []
    P = x1x2
    for m in range(1, 5):
        proper.append({"power": m, "identity": projective_scalar(P) is not None})
        P = P * x1x2
    ok = all(r["identity"] for r in rows) and not any(p["identity"] for p in proper)
    cert = Certificate(
        claim="relators of the presentation evaluate to the identity and x1 x2 has order exactly 5",
        inputs={"x1": "12", "x2": "23"},
        status=Status.PASS if ok else Status.FAIL,
        witness={"relators": rows, "lower_powers_of_x1x2": proper},
    )
    return pres, cert


# ---------------------------------------------------------------------------
# spinal spheres


@dataclass(frozen=True)
class SpinalSphere:
    owner: OrbitPoint

    @property
    def vector(self):
        return self.owner.vector


@dataclass(frozen=True)
class HeisenbergBox:
    x: RealInterval
    y: RealInterval
    t: RealInterval

    def disjoint_from(self, other: "HeisenbergBox") -> bool:
        return not (self.x.intersects(other.x) and self.y.intersects(other.y) and self.t.intersects(other.t))

    def as_floats(self):
        return tuple((float(iv.lower), float(iv.upper)) for iv in (self.x, self.y, self.t))


def spinal_sphere(w: str, G: TriangleGroup | None = None) -> SpinalSphere:
    return SpinalSphere(orbit_point(w, G))


@dataclass(frozen=True)
class _SpinalData:
    zeta: ComplexInterval
    tau: RealInterval
    lam2: RealInterval  # |lambda|^2, lambda the first coordinate of g p (unit-determinant g)


def _spinal_data(vector: Sequence[NFElement], scale: NFElement, bits: int) -> _SpinalData:
    q1 = vector[0]
    if q1.is_zero():
        raise FixesInfinity("orbit point is p_inf; the bisector is not defined")
    zeta = vector[1] / q1
    itau = vector[2] / q1 + (zeta * zeta.conj()) / 2
    lam = q1 * scale
    return _SpinalData(zeta.embed(bits).with_prec(bits), itau.embed(bits).with_prec(bits).im,
                       lam.embed(bits).with_prec(bits).abs2())


def _raw_orbit_vector(w: str, G: TriangleGroup):
    """g p for the matrix g of w, together with the factor undoing projective normalisation."""
    col = G.evaluate(w) * _p_inf(G)
    v = normalize_projective(col)
    first = next(x for x in col if not x.is_zero())
    return v, first


def spinal_bounds(w: str, G: TriangleGroup | None = None, bits: int = 64) -> HeisenbergBox:
    """Certified box containing the spinal sphere of ``w`` in Heisenberg coordinates.

    With g p = lambda (1, zeta, -|zeta|^2/2 + i tau) the sphere is
    |lambda|^2 (|z - zeta|^4 / 4 + (t - tau - Im(conj(z) zeta))^2) = 1.
    """
    G = G or standard_335()
    v, scale = _raw_orbit_vector(w, G)
    d = _spinal_data(v, scale, bits)
    r = d.lam2.reciprocal().sqrt()  # 1 / |lambda|
    R = (r * 2).sqrt()  # max |z - zeta|
    zabs = d.zeta.abs()
    spread = R * zabs + r
    box = HeisenbergBox(
        RealInterval(d.zeta.re.lo - R.hi, d.zeta.re.hi + R.hi, bits),
        RealInterval(d.zeta.im.lo - R.hi, d.zeta.im.hi + R.hi, bits),
        RealInterval(d.tau.lo - spread.hi, d.tau.hi + spread.hi, bits),
    )
    return box


class Disjointness(str, enum.Enum):
    DISJOINT = "disjoint"
    OVERLAP = "overlap"
    UNDECIDED = "undecided"


def _sphere_value(d: _SpinalData, z: ComplexInterval, t: RealInterval) -> RealInterval:
    """|lambda|^2 (|z - zeta|^4/4 + (t - tau - Im(conj(z) zeta))^2) - 1."""
    w = z - d.zeta
    im = z.re * d.zeta.im - z.im * d.zeta.re
    s = t - d.tau - im
    return d.lam2 * (w.abs2().square() * Fraction(1, 4) + s.square()) - 1


def _points_on_sphere(d: _SpinalData, bits: int, n_angle: int = 16, n_radius: int = 6):
    """Exact points of the spinal sphere (enclosed in intervals)."""
    r2 = d.lam2.reciprocal()
    rmax = (r2.sqrt() * 2).sqrt()
    rmax_lo = rmax.lower
    for a in range(n_angle):
        m = Fraction(2 * a - n_angle, n_angle) * 2  # rational parametrisation of the circle
        c, s_ = (1 - m * m) / (1 + m * m), 2 * m / (1 + m * m)
        for k in range(n_radius + 1):
            rho = rmax_lo * Fraction(k, n_radius + 1)
            w = ComplexInterval.from_rational(rho * c, rho * s_, bits)
            z = d.zeta + w
            rest = r2 - RealInterval.from_rational(rho ** 4 / 4, bits)
            if not rest.lo > 0:
                continue
            root = rest.sqrt()
            im = z.re * d.zeta.im - z.im * d.zeta.re
            for sign in (1, -1):
                yield z, d.tau + im + (root if sign > 0 else -root)


def spheres_disjoint(w1: str, w2: str, G: TriangleGroup | None = None, bits: int = 64) -> Disjointness:
    G = G or standard_335()
    b1, b2 = spinal_bounds(w1, G, bits), spinal_bounds(w2, G, bits)
    if b1.disjoint_from(b2):
        return Disjointness.DISJOINT
    v1, s1 = _raw_orbit_vector(w1, G)
    v2, s2 = _raw_orbit_vector(w2, G)
    if _vkey(v1) == _vkey(v2):
        return Disjointness.OVERLAP
    d1, d2 = _spinal_data(v1, s1, bits), _spinal_data(v2, s2, bits)
    # sample each sphere against the other so that the answer is symmetric
    for src, dst in ((d1, d2), (d2, d1)):
        signs = set()
        for z, t in _points_on_sphere(src, bits):
            sg = _sphere_value(dst, z, t).sign()
            if sg is not None:
                signs.add(sg)
            if len(signs) == 2:
                return Disjointness.OVERLAP
    return Disjointness.UNDECIDED


@dataclass
class SweepResult:
    m0: int
    pair_thresholds: dict  # (j, l) -> least M with disjointness for all |m| >= M
    certificate: Certificate


def disjointness_sweep(G: TriangleGroup | None = None, bits: int = 64, max_m: int = 40) -> SweepResult:
    """Find M0 with s(g_j) and s(a^m g_l) disjoint for all j, l and |m| >= M0.

    a is a Heisenberg translation by 1 in Re z (leaving Im z fixed), so once
    the Re z ranges separate at some m they stay separated for larger |m|.
    """
    G = G or standard_335()
    boxes = {j: spinal_bounds(CORE_WORDS[j - 1], G, bits) for j in range(1, 11)}
    thresholds = {}
    for j in range(1, 11):
        for l in range(1, 11):
            bj, bl = boxes[j], boxes[l]
            # Re-separation bound: for |m| >= sep the x ranges are disjoint
            span = max(abs(bj.x.upper - bl.x.lower), abs(bl.x.upper - bj.x.lower))
            sep = math.floor(span) + 1
            if sep > max_m:
                raise NumberFieldError("spinal spheres too large for the sweep bound")
            worst = 0
            for m in range(sep, 0, -1):
                bad = False
                for sgn in (1, -1):
                    n = face_index(l, sgn * m)
                    bm = spinal_bounds(face_word(n), G, bits)
                    if not bj.disjoint_from(bm):
                        bad = True
                if bad:
                    worst = m
                    break
            thresholds[(j, l)] = worst + 1
    m0 = max(thresholds.values())
    cert = Certificate(
        claim="spinal spheres of core faces are disjoint from far a-translates",
        inputs={"precision_bits": bits},
        status=Status.PASS,
        witness={"M0": m0, "thresholds": {f"{j},{l}": v for (j, l), v in sorted(thresholds.items())}},
        precision_bits=bits,
    )
    return SweepResult(m0, thresholds, cert)


# ---------------------------------------------------------------------------
# vertex cycles


def polar_vector(k: int, G: TriangleGroup | None = None) -> list:
    """Eigenvector of I_k with eigenvalue 1 (positive, orthogonal to the mirror)."""
    G = G or standard_335()
    M = G.reflection(k)
    basis = nullspace(M - Matrix.identity(3, G.field))
    if len(basis) != 1:
        raise NumberFieldError("reflection has no isolated polar vector")
    return list(normalize_projective(basis[0]))


def vertex_cycle_check(G: TriangleGroup | None = None) -> Certificate:
    G = G or standard_335()
    J = standard_form_J(G.field)
    n1, n3 = polar_vector(1, G), polar_vector(3, G)
    fix13 = hermitian_cross(n1, n3, J)
    conj = G.evaluate("32")
    fix_other = conj * fix13
    entries = []
    ok = True
    for word, v in (("13", fix13), ("321323", fix_other)):
        M = G.evaluate(word)
        Mv = M * v
        fixed = _projectively_equal_vectors(Mv, v)
        norm = J.inner(v, v)
        negative = nf_sign_certify(norm) < 0
        cls = classify_su21(M)
        order = _projective_order(M)
        ok = ok and fixed and negative and cls.kind == SU21Class.REGULAR_ELLIPTIC and order == 5
        entries.append({"word": word, "fixed_point": [x.coeffs for x in normalize_projective(v)],
                        "fixed": fixed, "negative": negative, "class": cls.kind.value, "order": order})
    a_cls = classify_su21(G.evaluate(A_WORD))
    no_interior = a_cls.kind == SU21Class.PARABOLIC_UNIPOTENT
    entries.append({"word": A_WORD, "class": a_cls.kind.value, "interior_fixed_point": not no_interior})
    ok = ok and no_interior
    return Certificate(
        claim="13 and 321323 fix interior points with order 5; 2313 has no interior fixed point",
        inputs={},
        status=Status.PASS if ok else Status.FAIL,
        witness=entries,
    )


# ---------------------------------------------------------------------------
# numeric face combinatorics (observed, never certified)


@dataclass
class AdjacencyReport:
    face: int
    neighbours: list  # observed adjacent face indices, sorted
    active_counts: dict  # neighbour -> sorted set of equidistant orbit point counts at refined ridge points
    boundary_neighbours: list  # neighbours met on the boundary at infinity
    tolerance: float
    grid: int
    certificate: Certificate

    def to_json(self) -> dict:
        return {
            "face": self.face,
            "neighbours": self.neighbours,
            "active_counts": {str(k): v for k, v in sorted(self.active_counts.items())},
            "boundary_neighbours": self.boundary_neighbours,
            "boundary_polygon_sides": len(self.boundary_neighbours),
            "tolerance": self.tolerance,
            "grid": self.grid,
            "status": self.certificate.status.value,
            "certified": False,
        }


def _complex_vector(w: str, G: TriangleGroup):
    col = G.evaluate(w) * _p_inf(G)
    return [complex(x) for x in col]


def numeric_face_combinatorics(j: int = 1, G: TriangleGroup | None = None, grid: int = 64,
                               depth: int | None = None, tolerance: float = 2.0 ** -40,
                               expected: Sequence[int] = ()) -> AdjacencyReport:
    """Sample the bisector of face j and record which other faces cut it off.

    The bisector is parametrised exactly (up to floating point) by an angle
    psi, a radial fraction sigma and an angle theta; sigma = 1 is the spinal
    sphere at infinity.  Crossings of a single other bisector between
    neighbouring grid points are refined by bisection, and at the refined
    point the number of orbit points equidistant from it (within the
    tolerance) is recorded; a generic ridge point sees exactly three.
    """
    import numpy as np

    G = G or standard_335()
    if depth is None:
        depth = disjointness_sweep(G).m0 + 1
    cands = [face_index(l, m) for l in range(1, 11) for m in range(-depth, depth + 1)]
    cands = [n for n in cands if n != j]
    Q = np.array([_complex_vector(face_word(n), G) for n in cands])  # (m, 3)
    q = _complex_vector(face_word(j), G)
    lam = q[0]
    zeta = q[1] / lam
    tau = (q[2] / lam + abs(zeta) ** 2 / 2).imag
    r = 1.0 / abs(lam)

    def points(psi, sigma, theta):
        rho = sigma * np.sqrt(2 * r * np.cos(psi))
        u = r * np.cos(psi) - rho ** 2 / 2
        z = zeta + rho * np.exp(1j * theta)
        t = tau + (np.conj(z) * zeta).imag + r * np.sin(psi)
        z3 = -np.abs(z) ** 2 / 2 - u + 1j * t
        return z, z3

    def values(z, z3):
        # |<q_g, Z>|^2 - 1 for every candidate g
        inner = Q[:, 2:3] + np.conj(z)[None, :] * Q[:, 1:2] + np.conj(z3)[None, :] * Q[:, 0:1]
        return np.abs(inner) ** 2 - 1

    n = grid
    psi = (np.arange(n) + 0.5) / n * np.pi - np.pi / 2
    sigma = np.arange(1, n + 1) / n
    theta = np.arange(n) / n * 2 * np.pi
    P, S, T = np.meshgrid(psi, sigma, theta, indexing="ij")
    z, z3 = points(P.ravel(), S.ravel(), T.ravel())
    D = values(z, z3)
    neg = D < 0
    nneg = neg.sum(axis=0).reshape(P.shape)
    arg = np.argmin(D, axis=0).reshape(P.shape)
    inside = nneg == 0

    crossings = {}
    boundary = set()
    shape = P.shape
    for axis in range(3):
        if axis == 2:
            B_in = inside
            B_nn = np.roll(nneg, -1, axis=2)
            B_arg = np.roll(arg, -1, axis=2)
            idx_a = np.argwhere(B_in & (B_nn == 1))
            shift = (0, 0, 1)
        else:
            sl_a = [slice(None)] * 3
            sl_b = [slice(None)] * 3
            sl_a[axis] = slice(0, shape[axis] - 1)
            sl_b[axis] = slice(1, shape[axis])
            B_in = inside[tuple(sl_a)]
            B_nn = nneg[tuple(sl_b)]
            B_arg = arg[tuple(sl_b)]
            idx_a = np.argwhere(B_in & (B_nn == 1))
            shift = tuple(1 if ax == axis else 0 for ax in range(3))
        for a in idx_a:
            b = tuple((a[i] + shift[i]) % shape[i] for i in range(3))
            k = int(B_arg[tuple(a)])
            crossings.setdefault(k, []).append((tuple(a), b))
            if a[1] == shape[1] - 1 and b[1] == shape[1] - 1:
                boundary.add(k)
    active = {}
    for k, edges in crossings.items():
        counts = set()
        for a, b in edges[:24]:
            pa = np.array([psi[a[0]], sigma[a[1]], theta[a[2]]])
            pb = np.array([psi[b[0]], sigma[b[1]], theta[b[2]]])
            if b[2] < a[2]:
                pb[2] += 2 * np.pi
            lo, hi = 0.0, 1.0  # D_k >= 0 at lo, < 0 at hi
            for _ in range(80):
                mid = (lo + hi) / 2
                pm = pa + (pb - pa) * mid
                zz, zz3 = points(pm[0:1], pm[1:2], pm[2:3])
                if values(zz, zz3)[k, 0] >= 0:
                    lo = mid
                else:
                    hi = mid
            pm = pa + (pb - pa) * lo
            zz, zz3 = points(pm[0:1], pm[1:2], pm[2:3])
            vals = values(zz, zz3)[:, 0]
            if vals.min() < -tolerance:
                continue
            counts.add(2 + int((np.abs(vals) <= tolerance).sum()))
        if counts:
            active[cands[k]] = sorted(counts)
    neighbours = sorted(active)
    boundary_neighbours = sorted(cands[k] for k in boundary if cands[k] in active)
    ok = all(v == [3] for v in active.values()) and all(e in neighbours for e in expected)
    cert = Certificate(
        claim=f"observed neighbours of face {j} (numeric sampling, not certified)",
        inputs={"face": j, "grid": grid, "depth": depth, "tolerance": tolerance,
                "expected": list(expected)},
        status=Status.PASS if ok else Status.UNDECIDED,
        witness={"neighbours": neighbours, "active_counts": {str(k): v for k, v in sorted(active.items())},
                 "boundary_neighbours": boundary_neighbours, "certified": False},
    )
    return AdjacencyReport(j, neighbours, active, boundary_neighbours, tolerance, grid, cert)
