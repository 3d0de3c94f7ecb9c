"""Complex hyperbolic (p, q, r) triangle groups generated by complex reflections.

The Hermitian form has unit diagonal with H12 = -cos(pi/p), H23 = -cos(pi/q)
and H13 = -cos(pi/r) * phi, where phi is a unit complex number.  With this
labelling I1 I2, I2 I3 and I3 I1 have orders p, q and r.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .linalg import HermitianForm, Matrix, is_unipotent, nullspace, standard_form_J
from .numfield import (
    RATIONALS,
    ExtensionFailure,
    NFElement,
    NumberField,
    NumberFieldError,
    field_from_poly,
    find_or_adjoin,
    nf_sign_certify,
)

# minimal polynomial (ascending, rational) and numeric value of cos(pi/p)
COS_TABLE = {
    2: ([0, 1], 0.0),
    3: ([Fraction(-1, 2), 1], 0.5),
    4: ([Fraction(-1, 2), 0, 1], 0.7071067811865476),
    5: ([Fraction(-1, 4), Fraction(-1, 2), 1], 0.8090169943749475),
    6: ([Fraction(-3, 4), 0, 1], 0.8660254037844386),
}


class NoAccidentalParabolic(NumberFieldError):
    pass


class Admissibility(str, enum.Enum):
    ADMISSIBLE = "admissible"
    BOUNDARY = "boundary"
    INADMISSIBLE = "inadmissible"


def cos_pi_over(n: int, field: NumberField):
    """cos(pi/n) as an element of ``field`` or of an extension of it."""
    if n not in COS_TABLE:
        raise ExtensionFailure(f"cos(pi/{n}) is outside the supported table (p <= 6)")
    poly, value = COS_TABLE[n]
    if len(poly) == 2:
        return field, field(-Fraction(poly[0]) / Fraction(poly[1]))
    return find_or_adjoin(field, poly, value)


@dataclass(frozen=True)
class TriangleParams:
    p: int
    q: int
    r: int
    phi: NFElement
    conjugate_branch: bool = False

    def __post_init__(self):
        if not (self.phi * self.phi.conj()).is_one():
            raise ValueError("phi must have modulus one")


def triangle_form(p: int, q: int, r: int, phi: NFElement) -> HermitianForm:
    for n in (p, q, r):
        if n < 2:
            raise ValueError("orders must be at least 2")
    F = phi.field
    if not (phi * phi.conj()).is_one():
        raise ValueError("phi must have modulus one")
    cs = []
    for n in (p, q, r):
        F2, c = cos_pi_over(n, F)
        if F2 is not F:
            F = F2
            phi = F.promote(phi)
            cs = [F.promote(x) for x in cs]
        cs.append(c)
    cp, cq, cr = cs
    h13 = -cr * phi
    return HermitianForm(
        [[1, -cp, h13], [-cp, 1, -cq], [h13.conj(), -cq, 1]], F
    )


def admissibility(params: TriangleParams) -> Admissibility:
    H = triangle_form(params.p, params.q, params.r, params.phi)
    s = nf_sign_certify(H.det())
    if s < 0:
        return Admissibility.ADMISSIBLE
    if s == 0:
        return Admissibility.BOUNDARY
    return Admissibility.INADMISSIBLE


def reflection_generators(H: HermitianForm):
    """I_k(e_j) = -e_j + 2 H_kj e_k for k = 1, 2, 3."""
    F = H.field
    gens = []
    for k in range(3):
        rows = [[(-1 if i == j else 0) for j in range(3)] for i in range(3)]
        rows = [[F(v) for v in row] for row in rows]
        for j in range(3):
            rows[k][j] = rows[k][j] + 2 * H[k, j]
        gens.append(Matrix(rows, F, H))
    return tuple(gens)


@dataclass
class TriangleGroup:
    params: TriangleParams | None
    H: HermitianForm
    I1: Matrix
    I2: Matrix
    I3: Matrix
    field: NumberField
    conjugator: Matrix | None = None
    original: "TriangleGroup | None" = None
    notes: dict = dc_field(default_factory=dict)

    @property
    def generators(self):
        return (self.I1, self.I2, self.I3)

    def reflection(self, k: int) -> Matrix:
        return self.generators[k - 1]

    def evaluate(self, word) -> Matrix:
        from .words import evaluate

        return evaluate(word, self)


def build_triangle_group(params: TriangleParams) -> TriangleGroup:
    H = triangle_form(params.p, params.q, params.r, params.phi)
    I1, I2, I3 = reflection_generators(H)
    return TriangleGroup(params, H, I1, I2, I3, H.field)


# ---------------------------------------------------------------------------
# accidental parabolicity


def trace_2313_symbolic(p: int, q: int, r: int):
    """trace(I2 I3 I1 I3) as a sympy expression in c = Re(phi)."""
    import sympy as sp

    c, s = sp.symbols("c s", real=True)
    phi, phib = c + sp.I * s, c - sp.I * s
    cp, cq, cr = (sp.cos(sp.pi / n) for n in (p, q, r))
    H = sp.Matrix([[1, -cp, -cr * phi], [-cp, 1, -cq], [-cr * phib, -cq, 1]])

    def refl(k):
        M = -sp.eye(3)
        for j in range(3):
            M[k, j] += 2 * H[k, j]
        return M

    I1, I2, I3 = refl(0), refl(1), refl(2)
    tr = sp.expand((I2 * I3 * I1 * I3).trace())
    tr = sp.rem(sp.Poly(tr, s), sp.Poly(s**2 - (1 - c**2), s)).as_expr()
    if sp.expand(tr).has(s):
        raise NumberFieldError("trace is not a function of Re(phi) alone")
    return sp.simplify(tr), c


def _det_symbolic(p: int, q: int, r: int):
    import sympy as sp

    c, s = sp.symbols("c s", real=True)
    cp, cq, cr = (sp.cos(sp.pi / n) for n in (p, q, r))
    phi, phib = c + sp.I * s, c - sp.I * s
    H = sp.Matrix([[1, -cp, -cr * phi], [-cp, 1, -cq], [-cr * phib, -cq, 1]])
    det = sp.rem(sp.Poly(sp.expand(H.det()), s), sp.Poly(s**2 - (1 - c**2), s)).as_expr()
    return det, c


def unit_from_real_part(c_expr, conjugate: bool = False) -> NFElement:
    """Exact phi = c + i sqrt(1 - c^2) in the field Q(phi)."""
    import sympy as sp

    x = sp.Symbol("x")
    im = sp.sqrt(1 - c_expr**2)
    phi_expr = c_expr - sp.I * im if conjugate else c_expr + sp.I * im
    mp = sp.Poly(sp.minimal_polynomial(phi_expr, x), x)
    coeffs = [Fraction(int(sp.Rational(v).p), int(sp.Rational(v).q)) for v in reversed(mp.all_coeffs())]
    approx = complex(sp.N(phi_expr, 30))
    if len(coeffs) == 2:
        return RATIONALS(-coeffs[0] / coeffs[1])
    F, phi = field_from_poly(coeffs, approx, name="phi")
    return phi


@dataclass
class AccidentalSolution:
    params: TriangleParams
    c_value: object  # sympy expression for Re(phi)
    trace_expr: object
    all_solutions: list


def solve_accidental_parabolic(p: int, q: int, r: int, conjugate: bool = False) -> AccidentalSolution:
    """phi with trace(I2 I3 I1 I3) = 3, in the admissible range, Im(phi) > 0 by default."""
    import sympy as sp

    tr, c = trace_2313_symbolic(p, q, r)
    det, c2 = _det_symbolic(p, q, r)
    det = det.subs(c2, c)
    sols = sp.solve(sp.Eq(tr, 3), c)
    good = []
    for sol in sols:
        v = complex(sp.N(sol, 40))
        if abs(v.imag) > 1e-30 or not -1 < v.real < 1:
            continue
        if sp.N(det.subs(c, sol), 40) < 0:
            good.append(sp.nsimplify(sol) if sol.is_number else sol)
    if not good:
        raise NoAccidentalParabolic(f"no admissible phi with trace(2313) = 3 for ({p},{q},{r})")
    c_sol = good[0]
    phi = unit_from_real_part(c_sol, conjugate)
    params = TriangleParams(p, q, r, phi, conjugate)
    return AccidentalSolution(params, c_sol, tr, good)


def accidental_group(p: int, q: int, r: int, conjugate: bool = False) -> TriangleGroup:
    sol = solve_accidental_parabolic(p, q, r, conjugate)
    G = build_triangle_group(sol.params)
    G.notes["c"] = sol.c_value
    return G


# ---------------------------------------------------------------------------
# standard form J


def _heis_matrix(z: NFElement, it: NFElement) -> Matrix:
    """M(z, t) with it = i*t given directly."""
    F = z.field
    return Matrix([[1, 0, 0], [z, 1, 0], [-(z * z.conj()) / 2 + it, -z.conj(), 1]], F)


def sqrt5_in(field: NumberField):
    return find_or_adjoin(field, [-5, 0, 1], 2.2360679774997896)


def scaled_conjugator_335(G: TriangleGroup) -> Matrix:
    """Explicit change of basis for the (3,3,5; infinity) group, scaled to give J.

    Entries are sqrt(2) times the usual printed ones, so that they lie in Q(phi).
    """
    F = G.field
    phi = G.params.phi
    F2, r5 = sqrt5_in(F)
    if F2 is not F:
        raise ExtensionFailure("sqrt(5) is expected to lie in Q(phi)")
    i_s = 2 * phi - r5 + 2  # i * sqrt(4 sqrt5 - 5)
    q11 = 2 + (3 - r5) * (-5 + i_s) / 4
    q13 = -2 + (1 + r5) * (1 - i_s) / 4
    q21 = (2 + (2 - r5) * (-3 + i_s)) / 4
    q31 = (1 - r5) * (-1 + i_s) / 4
    q33 = -2 + (1 + r5) * (-1 + i_s) / 4
    return Matrix([[q11, 0, q13], [q21, 1, -2], [q31, 0, q33]], F)


def printed_conjugator_335(G: TriangleGroup):
    """The conjugator exactly as usually printed (with sqrt(2) denominators).

    Returns (field, Q, Q^* H Q) computed over Q(phi, sqrt 2).
    """
    from .numfield import nf_adjoin

    F = G.field
    adj = nf_adjoin(F, [-2, 0, 1], 1.4142135623730951, name="psi")
    L, r2 = adj.field, adj.root
    Qs = scaled_conjugator_335(G).promote(L)
    Q = Matrix([[v / r2 for v in row] for row in Qs.rows], L)
    H = Matrix(G.H.rows, G.field).promote(L)
    return L, Q, Q.conj_transpose() * H * Q


def general_conjugator(G: TriangleGroup) -> Matrix:
    """Build Q column by column from the flag of I2 and the fixed point of 2313."""
    H = G.H
    F = G.field
    a = G.I2 * G.I3 * G.I1 * G.I3
    if not is_unipotent(a):
        raise NumberFieldError("I2 I3 I1 I3 is not unipotent")
    N = a - Matrix.identity(3, F)
    N2 = N * N
    q3 = None
    for j in range(3):
        col = N2.column(j)
        if any(not v.is_zero() for v in col):
            q3 = col
            break
    if q3 is None:
        # a is a vertical translation; its fixed point spans the image of N
        for j in range(3):
            col = N.column(j)
            if any(not v.is_zero() for v in col):
                q3 = col
                break
    # polar vector of I2
    q2 = [F.zero, F.one, F.zero]
    n2 = H.inner(q2, q2)
    if not n2.is_one():
        raise NumberFieldError("polar vector of I2 does not have unit norm")
    # complement of q3 inside the orthogonal complement of q2
    Hm = Matrix(H.rows, F)
    row = Matrix([[sum((q2[i].conj() * Hm[i, j] for i in range(3)), F.zero) for j in range(3)]], F)
    basis = nullspace(row)
    y = None
    for b in basis:
        M2 = Matrix([q3, b], F)
        if any(not (M2[0, i] * M2[1, j] - M2[0, j] * M2[1, i]).is_zero() for i in range(3) for j in range(i + 1, 3)):
            y = b
            break
    yy = H.inner(y, y)
    q3y = H.inner(q3, y)
    mu = -yy / (2 * q3y)
    q1 = [yi + mu * qi for yi, qi in zip(y, q3)]
    scale = H.inner(q1, q3).inverse()
    q1 = [scale * v for v in q1]
    Q = Matrix([[q1[i], q2[i], q3[i]] for i in range(3)], F)
    # normalise a to M(1, 0): diagonal rescaling then a Heisenberg shift
    at = Q.inverse() * a * Q
    z = at[1, 0]
    lam = z.inverse()
    D = Matrix.diag([lam, F.one, lam.conj().inverse()], F)
    Q = Q * D
    at = Q.inverse() * a * Q
    it = (at[2, 0] - at[2, 0].conj()) / 2
    if not it.is_zero():
        w = it / 2  # conjugating by M(w, 0) shifts t by -2 Im(w)
        Q = Q * _heis_matrix(w, F.zero)
    return Q


def conjugate_to_standard(G: TriangleGroup, prefer_explicit: bool = True):
    """Return (Q, G~) with Q^* H Q = J and a = 2313 lower triangular in G~."""
    F = G.field
    J = standard_form_J(F)
    Q = None
    if prefer_explicit and G.params is not None and (G.params.p, G.params.q, G.params.r) == (3, 3, 5):
        cand = scaled_conjugator_335(G)
        if _valid_conjugator(G, cand, J):
            Q = cand
            G.notes["conjugator"] = "explicit"
    if Q is None:
        Q = general_conjugator(G)
        G.notes["conjugator"] = "flag"
        if not _valid_conjugator(G, Q, J):
            raise ExtensionFailure("flag construction did not produce a valid conjugator")
    Qi = Q.inverse()
    gens = [Matrix((Qi * g * Q).rows, F, J) for g in G.generators]
    Gt = TriangleGroup(G.params, J, gens[0], gens[1], gens[2], F, conjugator=Q, original=G)
    return Q, Gt


A_STANDARD = [[1, 0, 0], [1, 1, 0], [Fraction(-1, 2), -1, 1]]


def _valid_conjugator(G: TriangleGroup, Q: Matrix, J: HermitianForm) -> bool:
    F = G.field
    H = Matrix(G.H.rows, F)
    if Q.conj_transpose() * H * Q != Matrix(J.rows, F):
        return False
    a = Q.inverse() * (G.I2 * G.I3 * G.I1 * G.I3) * Q
    return a == Matrix(A_STANDARD, F)


def standard_335() -> TriangleGroup:
    """The (3,3,5; infinity) group in J-coordinates (cached)."""
    global _STD335
    if _STD335 is None:
        G = accidental_group(3, 3, 5)
        _, _STD335 = conjugate_to_standard(G)
    return _STD335


_STD335 = None
