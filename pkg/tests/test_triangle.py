from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from crford.linalg import Matrix, is_unipotent, projective_scalar, signature, standard_form_J
from crford.numfield import ExtensionFailure, RATIONALS, find_or_adjoin
from crford.triangle import (
    A_STANDARD, Admissibility, TriangleParams, accidental_group, admissibility,
    build_triangle_group, conjugate_to_standard, printed_conjugator_335,
    solve_accidental_parabolic, triangle_form, unit_from_real_part,
)

from groups import fuchsian_335, original_335


def sqrt5(F):
    phi = original_335().params.phi
    return F.promote(phi + phi.inverse() + 2)


def test_phi_for_335():
    sol = solve_accidental_parabolic(3, 3, 5)
    phi = sol.params.phi
    assert list(phi.field.min_poly) == [1, 4, 1, 4, 1]
    assert sp.simplify(sol.c_value - (sp.sqrt(5) / 2 - 1)) == 0
    assert complex(phi).imag > 0
    r5 = phi + phi.inverse() + 2
    assert r5 * r5 == 5
    assert 2 * phi.real_part() == r5 - 2


def test_conjugate_branch_flag():
    phi = solve_accidental_parabolic(3, 3, 5, conjugate=True).params.phi
    assert complex(phi).imag < 0


def test_form_entries_for_335():
    G = original_335()
    phi = G.params.phi
    r5 = sqrt5(G.field)
    H = G.H
    assert H[0, 1] == Fraction(-1, 2) and H[1, 2] == Fraction(-1, 2)
    assert H[0, 2] == -(1 + r5) / 4 * phi
    assert H.det() == -(1 + r5) / 16


def test_fuchsian_form_is_real_symmetric():
    H = fuchsian_335().H
    assert all(v.is_real() for r in H.rows for v in r)
    assert all(H[i, j] == H[j, i] for i in range(3) for j in range(3))


def test_admissibility_examples():
    G = original_335()
    assert admissibility(G.params) == Admissibility.ADMISSIBLE
    # cos t = (sqrt5 - 3)/2 puts phi on the boundary of the admissible range
    c = (sp.sqrt(5) - 3) / 2
    phi_b = unit_from_real_part(c)
    assert admissibility(TriangleParams(3, 3, 5, phi_b)) == Admissibility.BOUNDARY
    assert admissibility(TriangleParams(3, 3, 5, RATIONALS(-1))) == Admissibility.INADMISSIBLE


def test_reflections_match_displayed_matrices():
    G = original_335()
    F = G.field
    phi = G.params.phi
    r5 = sqrt5(F)
    i_s = 2 * phi - r5 + 2
    assert G.I2 == Matrix([[-1, 0, 0], [-1, 1, -1], [0, 0, -1]], F)
    assert G.I1[0, 2] == -1 + (1 + r5) * (1 - i_s) / 4
    for g in G.generators:
        assert (g * g).is_identity()


def test_triangle_relations():
    G = original_335()
    for w, n in (("12", 3), ("23", 3), ("31", 5)):
        assert projective_scalar(G.evaluate(w) ** n) is not None


def test_trace_2313_equals_three():
    assert original_335().evaluate("2313").trace() == 3


def test_eigenvalue_sum_for_accidental_family():
    sol = solve_accidental_parabolic(3, 3, 5)
    c = sp.Symbol("c", real=True)
    tr = sol.trace_expr.subs(sp.Symbol("c", real=True), c)
    # trace = 1 + (sum of the other two eigenvalues)
    expected = (1 + sp.sqrt(5)) / 2 * (2 * c + 1)
    assert sp.simplify(tr - 1 - expected) == 0


def test_334_solution():
    G = accidental_group(3, 3, 4)
    assert G.evaluate("2313").trace() == 3
    assert admissibility(G.params) == Admissibility.ADMISSIBLE
    assert is_unipotent(G.evaluate("2313"))


def test_unsupported_order_rejected():
    with pytest.raises(ExtensionFailure):
        accidental_group(3, 3, 7)


def test_standardization_of_335():
    G = original_335()
    Q, Gt = conjugate_to_standard(G)
    F = G.field
    J = Matrix(standard_form_J(F).rows, F)
    assert Q.conj_transpose() * Matrix(G.H.rows, F) * Q == J
    assert Gt.evaluate("2313") == Matrix(A_STANDARD, F)
    assert Gt.I2 == Matrix.diag([-1, 1, -1], F)
    assert G.notes["conjugator"] == "explicit"


def test_printed_conjugator_scales_the_form_by_half():
    # with the 1/sqrt(2) normalisation the change of basis lands on J/2, not J
    L, Q, form = printed_conjugator_335(original_335())
    assert L.degree == 8
    J = Matrix(standard_form_J(L).rows, L)
    assert form == Matrix([[v / 2 for v in row] for row in J.rows], L)


def test_general_conjugator_for_334():
    G = accidental_group(3, 3, 4)
    Q, Gt = conjugate_to_standard(G)
    assert G.notes["conjugator"] == "flag"
    assert Gt.evaluate("2313") == Matrix(A_STANDARD, G.field)
    assert signature(Gt.H) == (2, 1)


def test_rigidity_of_2qr():
    # the phi-dependent entry carries cos(pi/2) = 0, so H does not depend on phi
    phi = original_335().params.phi
    H1 = triangle_form(3, 3, 2, phi)
    H2 = triangle_form(3, 3, 2, phi.field.one)
    assert H1[0, 2].is_zero() and H2.promote(H1.field) == H1


@settings(max_examples=50)
@given(st.fractions(min_value=Fraction(-1, 10), max_value=Fraction(1, 10), max_denominator=40))
def test_2313_has_real_trace_and_eigenvalue_one(c):
    # phi = (1 - u^2 + 2iu)/(1 + u^2) traces the unit circle with rational u
    u = c
    F, i = find_or_adjoin(RATIONALS, [1, 0, 1], 1j)
    phi = (1 - u * u + 2 * u * i) / (1 + u * u)
    params = TriangleParams(3, 3, 5, phi)
    if admissibility(params) != Admissibility.ADMISSIBLE:
        return
    G = build_triangle_group(params)
    M = G.evaluate("2313")
    assert M.trace().is_real()
    assert (M - Matrix.identity(3, G.field)).det().is_zero()
