import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crford.certificate import Status
from crford.linalg import Matrix, projective_scalar, projectively_equal
from crford.triangle import A_STANDARD
from crford.words import (
    GroupHom, Presentation, Word, builtin_presentation, commutator, conjugacy_witness, enumerate_even_words,
    enumerate_words, evaluate, hom_m009, hom_m015, induced_snappy_hom, invert_triangle, parse_relation,
    peripheral_analysis, projective_key, reduce_triangle, verify_homomorphism,
)

from groups import original_335, standard

triangle_words = st.text(alphabet="123", max_size=12)


def test_evaluate_examples():
    G = standard()
    assert evaluate("2313", G) == Matrix(A_STANDARD, G.field)
    assert evaluate("22", G).is_identity()
    assert projective_scalar(evaluate("13" * 5, G)) is not None


def test_reduce_and_invert():
    assert reduce_triangle("12213") == "3"
    assert reduce_triangle("1221") == ""
    assert invert_triangle("2313") == "3132"
    with pytest.raises(ValueError):
        reduce_triangle("124")


def test_word_parsing():
    x, y = Word([("x", 1)]), Word([("y", 1)])
    assert Word.parse("x[x,y]") == x * commutator(x, y)
    assert Word.parse("x^-1x") == Word()
    assert Word.parse("(xy)^2") == (x * y) ** 2
    assert parse_relation("c=ad") == Word.parse("c^-1 a d")


def test_builtin_presentations():
    m009 = builtin_presentation("m009")
    assert m009.relators == [Word.parse("a^2[a,d][a,d^-1]")]
    m015 = builtin_presentation("m015")
    assert m015.peripheral[0][0] == Word.parse("b^-1a^-1b")
    m004 = builtin_presentation("m004")
    assert m004.peripheral[0][0] == Word.parse("xy")
    assert m004.relators == [Word.parse("x[x,y][y^-1,x^-1]")]
    with pytest.raises(KeyError):
        builtin_presentation("m003")


def test_presentation_text_round_trip():
    p = builtin_presentation("m009_snappy")
    q = Presentation.from_text(p.to_text(), name=p.name)
    assert q.relators == p.relators and q.peripheral == p.peripheral and q.generators == p.generators


def test_presentation_rejects_empty_relator():
    with pytest.raises(ValueError):
        Presentation("bad", ("x",), [Word()])


def test_m009_homomorphism():
    cert = verify_homomorphism(hom_m009(), standard())
    assert cert.status == Status.PASS


def test_m015_homomorphism():
    cert = verify_homomorphism(hom_m015(), standard())
    assert cert.status == Status.PASS


def test_bad_homomorphism_fails():
    h = GroupHom(builtin_presentation("m009"), {"a": "2132", "d": "2132"})
    assert verify_homomorphism(h, standard()).status == Status.FAIL


def test_snappy_presentations_through_induced_images():
    for h in (hom_m009(), hom_m015()):
        assert verify_homomorphism(induced_snappy_hom(h), standard()).status == Status.PASS


def test_m009_peripheral_images():
    G = standard()
    cert = peripheral_analysis(hom_m009(), G, reference="2313")
    pair = cert.witness["pairs"][0]
    assert cert.status == Status.PASS
    assert pair["kind"] == "cyclic unipotent"
    assert (pair["u_power_of_reference"], pair["v_power_of_reference"]) == (1, 2)


def test_m015_peripheral_images():
    G = standard()
    h = hom_m015()
    cert = peripheral_analysis(h, G)
    pair = cert.witness["pairs"][0]
    target = evaluate(reduce_triangle("131" + "2313" + "131"), G)
    u, v = builtin_presentation("m015").peripheral[0]
    assert projectively_equal(h.matrix_image(u, G), target)
    assert projectively_equal(h.matrix_image(v, G), target.inverse())
    assert pair["kind"] == "cyclic unipotent"


def test_trivial_hom_is_degenerate():
    h = GroupHom(builtin_presentation("m009"), {"a": "", "d": ""})
    cert = peripheral_analysis(h, standard())
    assert cert.witness["pairs"][0]["kind"] == "degenerate"
    assert cert.status == Status.FAIL


def test_enumerate_even_words():
    G = standard()
    assert [w for w, _ in enumerate_even_words(G, 0)] == [""]
    two = [w for w, _ in enumerate_even_words(G, 2)]
    assert set(two) == {"", "12", "13", "21", "23", "31", "32"}
    four = {w for w, _ in enumerate_even_words(G, 4)}
    assert {"2313", "2321"} <= four


def test_enumeration_matches_naive_oracle():
    G = original_335()
    for n in range(0, 7):
        naive = set()
        for length in range(0, n + 1, 2):
            stack = [""]
            for _ in range(length):
                stack = [w + c for w in stack for c in "123" if not w or w[-1] != c]
            naive |= {projective_key(evaluate(w, G)) for w in stack}
        found = enumerate_even_words(G, n)
        keys = {projective_key(M) for w, M in found}
        assert len(keys) == len(found)
        assert keys == naive


def test_enumeration_is_monotone_and_shortlex():
    G = standard()
    counts = [len(enumerate_even_words(G, n)) for n in range(0, 8, 2)]
    assert counts == sorted(counts)
    words = [w for w, _ in enumerate_words(G, 6)]
    assert words == sorted(words, key=lambda w: (len(w), w))


def test_enumeration_cap():
    with pytest.raises(ValueError):
        enumerate_even_words(standard(), 20)


def test_conjugacy_witness():
    G = standard()
    cert = conjugacy_witness(hom_m009(), hom_m015(), G)
    assert cert.status == Status.PASS
    assert conjugacy_witness(hom_m009(), hom_m009(), G).status == Status.PASS
    w = cert.witness["h1"]["expressions"]["23"]["image"]
    assert projectively_equal(evaluate(w, G), evaluate("23", G))


@settings(max_examples=200)
@given(triangle_words, triangle_words)
def test_evaluate_is_a_homomorphism(u, v):
    G = standard()
    assert evaluate(u + v, G) == evaluate(u, G) * evaluate(v, G)


@settings(max_examples=100)
@given(triangle_words)
def test_free_reduction_preserves_projective_class(w):
    G = standard()
    assert projectively_equal(evaluate(w, G), evaluate(reduce_triangle(w), G))


def test_valid_certificates_have_cube_root_scalars():
    G = standard()
    for h in (hom_m009(), hom_m015()):
        for row in verify_homomorphism(h, G).witness["relators"]:
            assert row["pass"] and row["scalar"] is not None
        for r in h.source.relators:
            lam = projective_scalar(h.matrix_image(r, G))
            assert (lam ** 3).is_one()
