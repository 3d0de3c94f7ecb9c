"""Matrices over number fields, Hermitian forms and isometry classification.

Inner products follow ``<u, v> = v^* H u``: linear in the first slot,
conjugate-linear in the second.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

from .numfield import (
    RATIONALS,
    FieldMismatch,
    NFElement,
    NumberField,
    NumberFieldError,
    nf_adjoin,
    nf_sign_certify,
)


class DegenerateForm(NumberFieldError):
    pass


class NotIsometry(NumberFieldError):
    pass


class AdjoinRequired(NumberFieldError):
    """An eigenvalue lives outside the field; ``poly`` is its factor (ascending)."""

    def __init__(self, poly, message="eigenvalue field extension required"):
        super().__init__(message)
        self.poly = poly


def common_field(values) -> NumberField:
    best = RATIONALS
    for v in values:
        if isinstance(v, NFElement) and v.field is not best:
            if best is RATIONALS or v.field._embedding_from(best) is not None:
                best = v.field
            elif best._embedding_from(v.field) is None and v.field.degree != 1:
                raise FieldMismatch(f"entries live in unrelated fields {best!r} and {v.field!r}")
    return best


class Matrix:
    """Square or rectangular matrix of NFElements over a single field."""

    __slots__ = ("field", "rows", "form", "_hash")

    def __init__(self, rows, field: NumberField | None = None, form=None):
        rows = [list(r) for r in rows]
        if field is None:
            field = common_field(v for r in rows for v in r)
        self.field = field
        self.rows = tuple(
            tuple(v if isinstance(v, NFElement) and v.field is field else field(v) for v in r)
            for r in rows
        )
        self.form = form
        self._hash = None

    @classmethod
    def identity(cls, n: int, field: NumberField = RATIONALS) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def diag(cls, values, field: NumberField | None = None) -> "Matrix":
        values = list(values)
        n = len(values)
        zero = 0
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)], field)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def promote(self, field: NumberField) -> "Matrix":
        if field is self.field:
            return self
        return Matrix([[field.promote(v) for v in r] for r in self.rows], field, self.form)

    def _match(self, other: "Matrix"):
        if other.field is self.field:
            return self, other
        F = common_field([self.rows[0][0], other.rows[0][0]])
        return self.promote(F), other.promote(F)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            a, b = self._match(other)
            m, k = a.shape
            k2, n = b.shape
            if k != k2:
                raise ValueError("shape mismatch")
            cols = list(zip(*b.rows))
            F = a.field
            out = []
            for r in a.rows:
                row = []
                for c in cols:
                    acc = F.zero
                    for x, y in zip(r, c):
                        if x.nums[0] or any(x.nums):
                            if any(y.nums):
                                acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return Matrix(out, F, a.form if a.form is b.form else None)
        if isinstance(other, (list, tuple)):
            return [sum((x * y for x, y in zip(r, other)), self.field.zero) for r in self.rows]
        return Matrix([[v * other for v in r] for r in self.rows], None, self.form)

    def __rmul__(self, scalar):
        return Matrix([[scalar * v for v in r] for r in self.rows], None, self.form)

    def __add__(self, other: "Matrix") -> "Matrix":
        a, b = self._match(other)
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)], a.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        a, b = self._match(other)
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)], a.field)

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self.rows], self.field, self.form)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        try:
            a, b = self._match(other)
        except FieldMismatch:
            return False
        return a.rows == b.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        result.form = self.form
        return result

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)), self.field)

    def conj(self) -> "Matrix":
        return Matrix([[v.conj() for v in r] for r in self.rows], self.field)

    def conj_transpose(self) -> "Matrix":
        return Matrix([[v.conj() for v in r] for r in zip(*self.rows)], self.field)

    H = property(conj_transpose)

    def trace(self) -> NFElement:
        return sum((self.rows[i][i] for i in range(self.n)), self.field.zero)

    def det(self) -> NFElement:
        r = self.rows
        if self.n == 1:
            return r[0][0]
        if self.n == 2:
            return r[0][0] * r[1][1] - r[0][1] * r[1][0]
        if self.n == 3:
            return (
                r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
            )
        raise NotImplementedError("determinants only for n <= 3")

    def adjugate(self) -> "Matrix":
        r = self.rows
        if self.n == 2:
            return Matrix([[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]], self.field)
        if self.n == 3:
            def cof(i, j):
                rs = [k for k in range(3) if k != i]
                cs = [k for k in range(3) if k != j]
                m = r[rs[0]][cs[0]] * r[rs[1]][cs[1]] - r[rs[0]][cs[1]] * r[rs[1]][cs[0]]
                return m if (i + j) % 2 == 0 else -m
            return Matrix([[cof(j, i) for j in range(3)] for i in range(3)], self.field)
        raise NotImplementedError

    def inverse(self) -> "Matrix":
        d = self.det()
        adj = self.adjugate()
        if d.is_one():
            adj.form = self.form
            return adj
        inv = d.inverse()
        return Matrix([[v * inv for v in row] for row in adj.rows], self.field, self.form)

    def is_identity(self) -> bool:
        return all((v.is_one() if i == j else v.is_zero()) for i, r in enumerate(self.rows) for j, v in enumerate(r))

    def is_scalar(self) -> NFElement | None:
        lam = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if i == j:
                    if v != lam:
                        return None
                elif not v.is_zero():
                    return None
        return lam

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def charpoly(self) -> list:
        """Characteristic polynomial det(xI - M), ascending coefficients."""
        n = self.n
        tr = self.trace()
        if n == 2:
            return [self.det(), -tr, self.field.one]
        if n == 3:
            r = self.rows
            c2 = (r[0][0] * r[1][1] - r[0][1] * r[1][0]) + (r[0][0] * r[2][2] - r[0][2] * r[2][0]) \
                + (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            return [-self.det(), c2, -tr, self.field.one]
        raise NotImplementedError

    def approx(self, dps: int = 30):
        import mpmath

        return mpmath.matrix([[v.approx(dps) for v in r] for r in self.rows])

    def __repr__(self):
        return "Matrix(" + repr([list(r) for r in self.rows]) + ")"

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "rows": [[[str(c) for c in v.coeffs] for v in r] for r in self.rows],
        }


IsometryMatrix = Matrix


class HermitianForm(Matrix):
    __slots__ = ()

    def __init__(self, rows, field: NumberField | None = None, check: bool = True):
        super().__init__(rows, field)
        if check and self.conj_transpose() != Matrix(self.rows, self.field):
            raise ValueError("matrix is not Hermitian")

    def inner(self, u: Sequence, v: Sequence) -> NFElement:
        """<u, v> = v^* H u."""
        Hu = Matrix(self.rows, self.field) * list(u)
        return sum((x * y.conj() for x, y in zip(Hu, v)), self.field.zero)

    def promote(self, field: NumberField) -> "HermitianForm":
        if field is self.field:
            return self
        return HermitianForm([[field.promote(v) for v in r] for r in self.rows], field, check=False)


def standard_form_J(field: NumberField = RATIONALS) -> HermitianForm:
    return HermitianForm([[0, 0, 1], [0, 1, 0], [1, 0, 0]], field)


# ---------------------------------------------------------------------------


def is_isometry(M: Matrix, H: HermitianForm) -> bool:
    if M.shape != H.shape:
        raise ValueError("dimension mismatch")
    if not (M.field is H.field or M.field._embedding_from(H.field) is not None
            or H.field._embedding_from(M.field) is not None or H.field.degree == 1 or M.field.degree == 1):
        raise FieldMismatch("matrix and form live in unrelated fields")
    Hm = Matrix(H.rows, H.field)
    return M.conj_transpose() * Hm * M == Hm


def _descartes(coeffs_signs: list[int]) -> int:
    s = [c for c in coeffs_signs if c != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def signature(H: HermitianForm) -> tuple[int, int]:
    """Inertia (p, q) of a nondegenerate Hermitian form, computed exactly."""
    n = H.n
    if H.det().is_zero():
        raise DegenerateForm("form is degenerate")
    for perm in itertools.permutations(range(n)):
        P = Matrix([[H[perm[i], perm[j]] for j in range(n)] for i in range(n)], H.field)
        minors = []
        ok = True
        for k in range(1, n + 1):
            sub = Matrix([r[:k] for r in P.rows[:k]], H.field)
            m = sub.det()
            if m.is_zero():
                ok = False
                break
            minors.append(nf_sign_certify(m))
        if ok:
            signs = [1] + minors
            q = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
            return n - q, q
    # characteristic polynomial of a Hermitian matrix has real roots, so
    # Descartes' rule counts the positive ones exactly
    cp = Matrix(H.rows, H.field).charpoly()
    signs = [nf_sign_certify(c) for c in cp]
    p = _descartes(signs)
    neg = _descartes([s * (-1) ** i for i, s in enumerate(signs)])
    return p, neg


class SU21Class(str, enum.Enum):
    REGULAR_ELLIPTIC = "RegularElliptic"
    LOXODROMIC = "Loxodromic"
    PARABOLIC_UNIPOTENT = "ParabolicUnipotent"
    PARABOLIC_SCREW = "ParabolicScrew"
    ELLIPTIC_BOUNDARY = "EllipticBoundary"
    IDENTITY_LIKE = "Identity-like"


class PSL2Class(str, enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    LOXODROMIC = "Loxodromic"
    IDENTITY = "Identity"


def trace_discriminant(tau: NFElement) -> NFElement:
    """|tau|^4 - 8 Re(tau^3) + 18 |tau|^2 - 27."""
    a2 = tau * tau.conj()
    return a2 * a2 - 8 * (tau ** 3).real_part() + 18 * a2 - 27


@dataclass(frozen=True)
class Classification:
    kind: SU21Class
    discriminant: NFElement
    eigenvalue: NFElement | None = None

    def __eq__(self, other):
        if isinstance(other, (SU21Class, str)):
            return self.kind == other
        if isinstance(other, Classification):
            return self.kind == other.kind
        return NotImplemented

    def __hash__(self):
        return hash(self.kind)


def _poly_eval_matrix(M: Matrix, roots: list) -> Matrix:
    n = M.n
    P = Matrix.identity(n, M.field)
    for lam in roots:
        P = P * (M - Matrix.diag([lam] * n, M.field))
    return P


def _cube_root_of_unity(x: NFElement) -> bool:
    return (x ** 3).is_one()


def classify_su21(M: Matrix, form: HermitianForm | None = None, check: bool = True) -> Classification:
    if form is not None and check and not is_isometry(M, form):
        raise NotIsometry("matrix does not preserve the form")
    lam = M.is_scalar()
    tau = M.trace()
    f = trace_discriminant(tau)
    if lam is not None:
        return Classification(SU21Class.IDENTITY_LIKE, f, lam)
    s = nf_sign_certify(f)
    if s > 0:
        return Classification(SU21Class.LOXODROMIC, f)
    if s < 0:
        return Classification(SU21Class.REGULAR_ELLIPTIC, f)
    third = tau / 3
    if _cube_root_of_unity(third):
        N = _poly_eval_matrix(M, [third] * 3)
        if all(v.is_zero() for r in N.rows for v in r):
            return Classification(SU21Class.PARABOLIC_UNIPOTENT, f, third)
    # repeated eigenvalue mu (double), simple nu; mu is the root of gcd(p, p')
    mu = _double_root(M.charpoly())
    if mu is None:
        # triple eigenvalue which is not a cube root of unity cannot occur in SU(2,1)
        raise NotIsometry("unexpected eigenvalue configuration")
    nu = M.det() / (mu * mu)
    if nu == mu:
        return Classification(SU21Class.PARABOLIC_UNIPOTENT, f, mu)
    Z = _poly_eval_matrix(M, [mu, nu])
    if all(v.is_zero() for r in Z.rows for v in r):
        return Classification(SU21Class.ELLIPTIC_BOUNDARY, f, mu)
    return Classification(SU21Class.PARABOLIC_SCREW, f, mu)


def _double_root(cp: list) -> NFElement | None:
    """Root of multiplicity exactly two of a monic cubic, assuming one exists."""
    der = [cp[1], 2 * cp[2], 3 * cp[3]]
    g = poly_gcd(cp, der)
    if len(g) == 2:
        return -g[0] / g[1]
    return None


def poly_rem(a: list, b: list) -> list:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] = a[i + shift] - f * c
        a.pop()
        while a and a[-1].is_zero():
            a.pop()
    return a


def poly_gcd(a: list, b: list) -> list:
    a = [x for x in a]
    b = [x for x in b]
    while b and b[-1].is_zero():
        b.pop()
    while b:
        a, b = b, poly_rem(a, b)
    lead = a[-1]
    return [c / lead for c in a]


@dataclass(frozen=True)
class UnipotentCheck:
    unipotent: bool
    is_identity: bool

    def __bool__(self):
        return self.unipotent


def is_unipotent(M: Matrix) -> UnipotentCheck:
    n = M.n
    if M.is_identity():
        return UnipotentCheck(False, True)
    if M.trace() != n:
        return UnipotentCheck(False, False)
    N = M - Matrix.identity(n, M.field)
    P = N ** n
    return UnipotentCheck(all(v.is_zero() for r in P.rows for v in r), False)


def classify_psl2(M: Matrix) -> PSL2Class:
    if M.det() != 1:
        raise ValueError("determinant is not 1")
    lam = M.is_scalar()
    if lam is not None:
        return PSL2Class.IDENTITY
    tr = M.trace()
    if tr == 2 or tr == -2:
        return PSL2Class.PARABOLIC
    if tr.is_rational():
        real = True
    else:
        try:
            real = tr.is_real()
        except NumberFieldError:
            c = tr.embed(256)
            real = False if c.im.sign() is not None else None
            if real is None:
                raise
    if real and nf_sign_certify(tr * tr - 4) < 0:
        return PSL2Class.ELLIPTIC
    return PSL2Class.LOXODROMIC


def projectively_equal(M: Matrix, N: Matrix) -> bool:
    """N = lambda M with lambda^n = 1 (n = 3) or lambda^2 = 1 (n = 2)."""
    if M.shape != N.shape:
        return False
    M, N = M._match(N)
    lam = None
    for r, s in zip(M.rows, N.rows):
        for a, b in zip(r, s):
            if not a.is_zero():
                lam = b / a
                break
        if lam is not None:
            break
    if lam is None:
        return all(v.is_zero() for r in N.rows for v in r)
    order = 3 if M.n == 3 else 2
    if not (lam ** order).is_one():
        return False
    return all(b == lam * a for r, s in zip(M.rows, N.rows) for a, b in zip(r, s))


def projective_scalar(M: Matrix) -> NFElement | None:
    """lambda when M is lambda * identity, else None."""
    return M.is_scalar()


# ---------------------------------------------------------------------------
# eigenvectors


def nullspace(M: Matrix) -> list[list[NFElement]]:
    F = M.field
    rows = [list(r) for r in M.rows]
    m, n = M.shape
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * n
        v[fc] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def eigenvalues(M: Matrix, adjoin: bool = False):
    """Distinct eigenvalues of M.  Returns (matrix over the eigenvalue field, list)."""
    F = M.field
    cp = M.charpoly()
    out = []
    for f, _ in F.factor(cp):
        if len(f) == 2:
            out.append(-f[0] / f[1])
        else:
            if not adjoin:
                raise AdjoinRequired(f)
            import mpmath

            # adjoin one root at a time and restart over the bigger field
            with mpmath.workdps(40):
                approx = complex(mpmath.polyroots([c.approx(40) for c in reversed(f)])[0])
            adj = nf_adjoin(F, f, approx)
            return eigenvalues(M.promote(adj.field), adjoin=True)
    return M, out


def eigenvectors(M: Matrix, adjoin: bool = False):
    M2, vals = eigenvalues(M, adjoin)
    n = M2.n
    res = []
    for lam in vals:
        basis = nullspace(M2 - Matrix.diag([lam] * n, M2.field))
        res.append((lam, basis))
    return M2, res


def normalize_projective(v: Sequence[NFElement]) -> tuple:
    """Scale so that the first nonzero coordinate is 1."""
    for x in v:
        if not x.is_zero():
            inv = x.inverse()
            return tuple(y * inv for y in v)
    raise ValueError("zero vector")


def vectors_projectively_equal(u: Sequence[NFElement], v: Sequence[NFElement]) -> bool:
    a, b = normalize_projective(u), normalize_projective(v)
    return all(x == y for x, y in zip(a, b))


INFINITY = "infinity"


def fixed_points_boundary(M: Matrix, form: HermitianForm | None = None, adjoin: bool = False):
    """Null eigenvectors (3x3) or fixed points in C u {infinity} (2x2)."""
    if M.is_scalar() is not None:
        raise ValueError("identity-like matrix fixes everything")
    if M.n == 2:
        a, b = M.rows[0]
        c, d = M.rows[1]
        if c.is_zero():
            pts = [INFINITY]
            if a != d:
                pts.append(b / (d - a))
            return pts
        # c z^2 + (d - a) z - b = 0
        poly = [-b, d - a, c]
        disc = (d - a) * (d - a) + 4 * b * c
        if disc.is_zero():
            return [(a - d) / (2 * c)]
        roots = M.field.roots_of(poly)
        if len(roots) < 2:
            if not adjoin:
                raise AdjoinRequired(poly)
            import mpmath

            z = complex(mpmath.polyroots([v.approx(30) for v in reversed(poly)])[0])
            adj = nf_adjoin(M.field, poly, z)
            return fixed_points_boundary(M.promote(adj.field), form, adjoin)
        return roots
    if form is None:
        raise ValueError("3x3 matrices need a Hermitian form")
    M2, pairs = eigenvectors(M, adjoin)
    H = form.promote(M2.field)
    out = []
    for lam, basis in pairs:
        if len(basis) == 1:
            v = basis[0]
            if H.inner(v, v).is_zero():
                out.append(normalize_projective(v))
    return out


def hermitian_cross(u: Sequence[NFElement], v: Sequence[NFElement], H: HermitianForm) -> list:
    """Vector w with <w, u> = <w, v> = 0."""
    a = [x.conj() for x in u]
    b = [x.conj() for x in v]
    c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    Hinv = Matrix(H.rows, H.field).inverse()
    return Hinv * c
