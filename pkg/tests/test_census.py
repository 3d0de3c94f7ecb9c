from crford import census
from crford.linalg import PSL2Class, classify_psl2


def test_representations_have_unit_determinant():
    for name in ("m004", "m009", "m015"):
        rep = census.census(name)
        assert rep.x.det() == 1 and rep.y.det() == 1


def test_relators_map_to_scalars():
    for name in ("m004", "m009", "m015"):
        rep = census.census(name)
        for r in rep.hom.source.relators:
            lam = rep.hom.matrix_image(r).is_scalar()
            assert lam is not None and (lam * lam).is_one()


def test_m004_relator_entries_vanish():
    assert all(e.is_zero() for e in census.m004_relator_entries())
    assert all(e.is_zero() for e in census.m004_factored_entries())


def test_m004_triangular_generators():
    rep = census.m004()
    assert rep.word("x^2yx^-1") == rep.constants["s"]
    assert rep.word("xyx") == rep.constants["t"]


def test_m015_triangular_generators():
    rep = census.m015()
    assert rep.word("yx") == rep.constants["yx"]
    assert rep.word("xyx") == rep.constants["xyx"]


def test_peripheral_pairs_are_commuting_parabolics():
    for name, (u, v) in census.CUSP_PAIRS.items():
        rep = census.census(name)
        U, V = rep.word(u), rep.word(v)
        assert classify_psl2(U) == PSL2Class.PARABOLIC
        assert classify_psl2(V) == PSL2Class.PARABOLIC
        assert U * V == V * U


def test_field_constants():
    assert census.field_alpha().min_poly == (1, 0, -1, 0, 1)
    assert abs(complex(census.field_gamma().gen) - complex(0.87743883, -0.74486176)) < 1e-8
