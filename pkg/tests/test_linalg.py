import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crford.linalg import (
    INFINITY, DegenerateForm, HermitianForm, Matrix, NotIsometry, PSL2Class, SU21Class, classify_psl2,
    classify_su21, fixed_points_boundary, is_isometry, is_unipotent, projectively_equal, signature,
    standard_form_J,
)
from crford.census import m004, m009
from crford.numfield import RATIONALS
from crford.triangle import A_STANDARD

from groups import fuchsian_335, original_335, standard

triangle_words = st.text(alphabet="123", max_size=12)


def test_i2_is_isometry_of_h335():
    G = original_335()
    F = G.field
    I2 = Matrix([[-1, 0, 0], [-1, 1, -1], [0, 0, -1]], F)
    assert G.I2 == I2
    assert is_isometry(I2, G.H)


def test_identity_is_isometry():
    G = original_335()
    assert is_isometry(Matrix.identity(3, G.field), G.H)


def test_perturbed_i2_is_not_isometry():
    G = original_335()
    rows = [list(r) for r in G.I2.rows]
    rows[0][1] = rows[0][1] + 1
    assert not is_isometry(Matrix(rows, G.field), G.H)


def test_signatures():
    assert signature(original_335().H) == (2, 1)
    assert signature(standard_form_J(RATIONALS)) == (2, 1)
    assert signature(HermitianForm([[1, 0, 0], [0, 1, 0], [0, 0, 1]], RATIONALS)) == (3, 0)


def test_degenerate_form_rejected():
    with pytest.raises(DegenerateForm):
        signature(HermitianForm([[1, 1, 0], [1, 1, 0], [0, 0, 1]], RATIONALS))


def test_classify_a_unipotent():
    G = standard()
    a = G.evaluate("2313")
    assert a == Matrix(A_STANDARD, G.field)
    assert classify_su21(a, G.H) == SU21Class.PARABOLIC_UNIPOTENT
    assert is_unipotent(a)


def test_classify_13_regular_elliptic():
    G = original_335()
    M = G.evaluate("13")
    assert classify_su21(M, G.H) == SU21Class.REGULAR_ELLIPTIC
    assert (M ** 5).is_scalar() is not None
    assert all((M ** m).is_scalar() is None for m in range(1, 5))


def test_fuchsian_2313_loxodromic():
    G = fuchsian_335()
    assert classify_su21(G.evaluate("2313"), G.H) == SU21Class.LOXODROMIC


def test_classify_rejects_non_isometry():
    G = original_335()
    with pytest.raises(NotIsometry):
        classify_su21(Matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]], G.field), G.H)


def test_unipotent_examples():
    G = standard()
    assert not is_unipotent(G.I2)
    ident = is_unipotent(Matrix.identity(3, G.field))
    assert not ident and ident.is_identity


def test_classify_psl2_examples():
    assert classify_psl2(Matrix([[1, 1], [0, 1]], RATIONALS)) == PSL2Class.PARABOLIC
    rep = m004()
    assert classify_psl2(rep.word("xyx")) == PSL2Class.PARABOLIC
    assert classify_psl2(Matrix.identity(2, RATIONALS)) == PSL2Class.IDENTITY
    assert classify_psl2(Matrix([[2, 0], [0, "1/2"]], RATIONALS)) == PSL2Class.LOXODROMIC


def test_projective_equality():
    G = original_335()
    assert projectively_equal(G.evaluate("232323"), Matrix.identity(3, G.field))
    assert not projectively_equal(G.I1, G.I2)


def test_fixed_point_of_xy_in_m009():
    rep = m009()
    b, i = rep.constants["beta"], rep.constants["i"]
    assert fixed_points_boundary(rep.word("xy")) == [-i * b]


def test_fixed_point_of_a_is_p_infinity():
    G = standard()
    pts = fixed_points_boundary(G.evaluate("2313"), G.H)
    F = G.field
    assert pts == [(F.zero, F.zero, F.one)]


def test_loxodromic_psl2_fixed_points():
    pts = fixed_points_boundary(Matrix([[2, 0], [0, "1/2"]], RATIONALS))
    assert set(map(str, pts)) == {INFINITY, str(RATIONALS(0))}


@settings(max_examples=200)
@given(triangle_words)
def test_every_word_is_an_isometry(w):
    G = original_335()
    assert is_isometry(G.evaluate(w), G.H)


@settings(max_examples=100)
@given(triangle_words)
def test_unipotent_implies_parabolic_unipotent(w):
    G = standard()
    M = G.evaluate(w)
    if is_unipotent(M):
        assert classify_su21(M, G.H, check=False) == SU21Class.PARABOLIC_UNIPOTENT


@settings(max_examples=50)
@given(st.lists(triangle_words, min_size=3, max_size=3))
def test_projective_equality_is_an_equivalence(ws):
    G = original_335()
    u, v, w = (G.evaluate(x) for x in ws)
    assert projectively_equal(u, u)
    assert projectively_equal(u, v) == projectively_equal(v, u)
    if projectively_equal(u, v) and projectively_equal(v, w):
        assert projectively_equal(u, w)


def numeric_class(M: Matrix) -> str:
    """Classify from 512-bit numerical eigenvalues."""
    with mpmath.workprec(512):
        A = M.approx(160)
        vals = mpmath.eig(A, left=False, right=False)
        # a 3x3 Jordan block splits its eigenvalue by about eps^(1/3) ~ 1e-51
        repeated = mpmath.mpf(10) ** -30
        if max(abs(abs(v) - 1) for v in vals) > repeated:
            return "Loxodromic"
        gaps = [abs(vals[i] - vals[j]) for i in range(3) for j in range(i + 1, 3)]
        if min(gaps) > repeated:
            return "RegularElliptic"
        if max(gaps) < repeated:
            return "Identity-like" if mpmath.mnorm(A - vals[0] * mpmath.eye(3)) < repeated else "ParabolicUnipotent"
        pairs = [(0, 1), (0, 2), (1, 2)]
        i, j = pairs[gaps.index(min(gaps))]
        mu = (vals[i] + vals[j]) / 2
        nu = [vals[k] for k in range(3) if k not in (i, j)][0]
        Z = (A - mu * mpmath.eye(3)) * (A - nu * mpmath.eye(3))
        return "EllipticBoundary" if mpmath.mnorm(Z) < repeated else "ParabolicScrew"


@settings(max_examples=1000)
@given(triangle_words)
def test_classification_agrees_with_numerical_eigenvalues(w):
    G = original_335()
    M = G.evaluate(w)
    assert classify_su21(M, G.H, check=False).kind.value == numeric_class(M)
