import functools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crford.census import field_alpha, field_beta_i, field_gamma
from crford.numfield import (
    DivisionByZero, NFElement, NotReal, RATIONALS, RejectAmbiguousRoot, RejectReducible, conjugation_closure,
    nf_adjoin, nf_arith, nf_create, nf_embed, nf_sign_certify,
)
from crford.triangle import solve_accidental_parabolic

small = st.fractions(min_value=-20, max_value=20, max_denominator=50)


@functools.lru_cache(maxsize=None)
def phi_field():
    return solve_accidental_parabolic(3, 3, 5).params.phi.field


def test_alpha_field_is_twelfth_root_of_unity():
    a = field_alpha().gen
    assert (a ** 12).is_one()
    assert abs(complex(a) - complex(-(3 ** 0.5) / 2, 0.5)) < 1e-12


def test_reducible_polynomial_rejected():
    with pytest.raises(RejectReducible):
        nf_create([-1, 0, 1], 1.0)


def test_ambiguous_root_rejected():
    with pytest.raises(RejectAmbiguousRoot):
        nf_create([-2, 0, 1], 0.0)


def test_sqrt2_field():
    F = nf_create([-2, 0, 1], 1.414)
    assert F.gen * F.gen == 2
    assert nf_sign_certify(F.gen) == 1


def test_alpha_times_conjugate_is_one():
    a = field_alpha().gen
    assert nf_arith(a, a.conj(), "×").is_one()
    assert a.conj() == a.inverse()


def test_beta_identity():
    F, b, i = field_beta_i()
    assert (2 * b ** 2 + 1) ** 2 == -7
    assert i * i == -1


def test_additive_identity():
    g = field_gamma().gen
    assert g + 0 == g


def test_division_by_zero():
    g = field_gamma().gen
    with pytest.raises(DivisionByZero):
        nf_arith(g, g - g, "÷")


def test_gamma_embedding():
    box = nf_embed(field_gamma().gen, 30)
    assert abs(box.mid() - complex(0.87743883, -0.74486176)) < 1e-8


def test_rational_embedding_degenerate():
    x = RATIONALS(Fraction(3, 2))
    box = nf_embed(x, 100)
    assert box.re.lower == Fraction(3, 2) == box.re.upper


def test_embedding_refinement_nests():
    phi = solve_accidental_parabolic(3, 3, 5).params.phi
    coarse, fine = nf_embed(phi, 40), nf_embed(phi, 160)
    assert fine.subset_of(coarse)
    assert fine.width < Fraction(2, 2 ** 160)


def test_real_part_of_phi():
    phi = solve_accidental_parabolic(3, 3, 5).params.phi
    assert abs(complex(phi).real - 0.1180339887) < 1e-9


def test_phi_min_poly():
    assert list(phi_field().min_poly) == [1, 4, 1, 4, 1]


def test_adjoin_sqrt5_returns_same_field():
    F = phi_field()
    phi = F.gen
    adj = nf_adjoin(F, [-5, 0, 1], 2.2360679775)
    assert adj.field is F
    assert adj.root == phi + phi.inverse() + 2


def test_adjoin_sqrt2_degree_eight():
    F = phi_field()
    adj = nf_adjoin(F, [-2, 0, 1], 1.4142135623730951)
    assert adj.field.degree == 8
    assert adj.root * adj.root == 2
    phi = adj.embedding(F.gen)
    assert phi ** 4 + 4 * phi ** 3 + phi ** 2 + 4 * phi + 1 == 0


def test_adjoin_i_to_rationals():
    adj = nf_adjoin(RATIONALS, [1, 0, 1], 1j)
    assert adj.field.degree == 2
    assert adj.root * adj.root == -1


def test_sign_certify_examples():
    F = phi_field()
    phi = F.gen
    r5 = phi + phi.inverse() + 2
    assert nf_sign_certify(-(1 + r5) / 16) == -1
    assert nf_sign_certify(F.zero) == 0
    assert nf_sign_certify(4 * r5 - 5) == 1


def test_sign_certify_rejects_nonreal():
    with pytest.raises(NotReal):
        nf_sign_certify(phi_field().gen)


def test_conjugation_closure_of_gamma():
    adj = conjugation_closure(field_gamma())
    L = adj.field
    g = adj.embedding(field_gamma().gen)
    assert L.has_conjugation
    assert abs(complex(g.conj()) - complex(g).conjugate()) < 1e-12


def test_json_round_trip():
    F = field_gamma()
    data = F.to_json()
    G = type(F).from_json(data)
    assert G.min_poly == F.min_poly
    assert abs(G.approx - F.approx) < 1e-12


@given(st.lists(small, min_size=4, max_size=4))
def test_conjugation_is_involution(coeffs):
    F = phi_field()
    a = NFElement.from_fractions(F, coeffs)
    assert a.conj().conj() == a


@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_embedding_of_product_inside_product_of_embeddings(u, v):
    F = phi_field()
    a = sum((c * F.gen ** k for k, c in enumerate(u)), F.zero)
    b = sum((c * F.gen ** k for k, c in enumerate(v)), F.zero)
    ea, eb = nf_embed(a, 64), nf_embed(b, 64)
    eab = nf_embed(a * b, 64)
    assert (ea * eb).intersects(eab)


def test_unit_generators_have_modulus_one():
    for gen in (field_alpha().gen, phi_field().gen):
        assert (gen.conj() * gen).is_one()


@given(st.lists(small, min_size=3, max_size=3))
def test_sign_certify_terminates(coeffs):
    F = phi_field()
    phi = F.gen
    r5 = phi + phi.inverse() + 2
    a = coeffs[0] + coeffs[1] * r5 + coeffs[2] * r5 * r5
    s = nf_sign_certify(a)
    assert s == (0 if a.is_zero() else (1 if complex(a).real > 0 else -1))
