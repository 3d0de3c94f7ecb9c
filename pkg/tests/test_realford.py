import functools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crford import census
from crford.intervals import ComplexInterval, RealInterval
from crford.linalg import Matrix
from crford.numfield import RATIONALS
from crford.realford import (
    FixesInfinity, NoCommonFixedPoint, NotParabolic, closed_field, cusp_shape, emit_prism_svg,
    enumerate_moebius, extend_to_h3, ford_domain, ford_setup, isometric_sphere, lattice_equivalent,
    partial_ford,
)

coords = st.fractions(min_value=-3, max_value=3, max_denominator=20)
heights = st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=20)


@functools.lru_cache(maxsize=None)
def m004_ford():
    return ford_domain("m004", 6)


@functools.lru_cache(maxsize=None)
def m004_closed_words():
    rep = census.m004()
    L, emb = closed_field(rep.field)
    mats = enumerate_moebius({"x": rep.x, "y": rep.y}, 3)
    return L, emb, [Matrix(M.rows, rep.field).promote(L) for _, M in mats]


def census_shape(name):
    rep = census.census(name)
    u, v = census.CUSP_PAIRS[name]
    return cusp_shape(rep.word(u), rep.word(v))


def i_unit(L):
    return [r for r in L.roots_of([L(1), L(0), L(1)]) if complex(r).imag > 0][0]


def reduced_centres(res, digits=9):
    w1, w2 = (complex(v) for v in res.lattice)
    det = (w1.conjugate() * w2).imag
    out = set()
    for s in res.visible:
        z = complex(s.center)
        a = (z.conjugate() * w2).imag / det
        b = (w1.conjugate() * z).imag / det
        a, b = a - round(a), b - round(b)
        out.add((round(a % 1.0, digits) % 1.0, round(b % 1.0, digits) % 1.0))
    return out


def test_sphere_of_m004_parabolic():
    rep = census.m004()
    a = rep.constants["alpha"]
    g = rep.word("x^2yx^-1")
    assert g == Matrix([[1, 0], [a, 1]], rep.field)
    s = isometric_sphere(g)
    assert s.center == -a.inverse()
    assert s.radius_sq.is_one()


def test_sphere_of_m015_parabolic():
    rep = census.m015()
    g = rep.constants["gamma"]
    s = isometric_sphere(rep.constants["xyx"])
    assert s.center == -g.inverse()
    L, emb = closed_field(rep.field)
    gg = emb(g)
    assert s.radius_sq == (gg * gg.conj()).inverse()


def test_translation_fixes_infinity():
    with pytest.raises(FixesInfinity):
        isometric_sphere(Matrix([[1, 1], [0, 1]], RATIONALS))


def test_extend_translation():
    g = Matrix([[1, 1], [0, 1]], RATIONALS)
    assert extend_to_h3(g, (RATIONALS(0), RATIONALS(1))) == (1, 1)


def test_extend_inversion_fixes_apex():
    g = Matrix([[0, -1], [1, 0]], RATIONALS)
    assert extend_to_h3(g, (RATIONALS(0), RATIONALS(1))) == (0, 1)


def test_interval_extension_encloses_exact():
    g = Matrix([[2, 1], [1, 1]], RATIONALS)
    z0, t0 = Fraction(1, 3), Fraction(1, 2)
    ez, et = extend_to_h3(g, (RATIONALS(z0), RATIONALS(t0)))
    iz, it = extend_to_h3(g, (ComplexInterval.from_rational(z0, 0, 64), RealInterval.from_rational(t0, 64)))
    assert iz.re.lower <= ez.rational() <= iz.re.upper
    assert it.lower <= et.rational() <= it.upper


def test_sphere_points_map_to_inverse_sphere():
    _, _, mats = m004_closed_words()
    bits = 96
    for g in mats:
        if g[1, 0].is_zero():
            continue
        s, s_inv = isometric_sphere(g), isometric_sphere(g.inverse())
        r2 = s.radius_sq
        for frac in (Fraction(0), Fraction(3, 5), Fraction(4, 5)):
            # |dz|^2 = frac^2 r^2, so the point at height sqrt((1 - frac^2) r^2) lies on the sphere
            z = s.center + frac / g[1, 0].conj()
            t = ((1 - frac * frac) * r2).embed(bits).re.with_prec(bits)
            zi, ti = extend_to_h3(g, (z.embed(bits).with_prec(bits), t.sqrt()))
            dz = zi - s_inv.center.embed(bits).with_prec(bits)
            gap = dz.abs2() + ti.square() - s_inv.radius_sq.embed(bits).re.with_prec(bits)
            assert gap.contains_zero()
            assert gap.width < Fraction(1, 2 ** 40)


def test_cusp_shapes():
    assert census_shape("m004") ** 2 == -12
    assert census_shape("m009") ** 2 == -7
    assert complex(census_shape("m004")).imag > 0 and complex(census_shape("m009")).imag > 0
    g = census.m015().constants["gamma"]
    # the raw entry ratio for m015 is the negative of 4(gamma - 1)
    assert census_shape("m015") == -4 * (g - 1)


def test_m015_shape_spans_the_stated_lattice():
    g = census.m015().constants["gamma"]
    assert lattice_equivalent(census_shape("m015"), 4 * (g - 1))
    assert not lattice_equivalent(census_shape("m015"), census_shape("m015") + Fraction(1, 2))


def test_cusp_shape_errors():
    rep = census.m004()
    with pytest.raises(NotParabolic):
        cusp_shape(rep.word("xy^-1"), rep.constants["t"])
    with pytest.raises(NoCommonFixedPoint):
        cusp_shape(rep.constants["s"], rep.constants["t"])


def test_m009_second_generator_conjugates_to_triangular():
    rep = census.m009()
    b = rep.constants["beta"]
    P1, P2 = ford_setup("m009").cusp
    assert P1[1, 0].is_zero() and P2[1, 0].is_zero()
    targets = [Matrix([[-1, 1 + 2 * b ** 2], [0, -1]], rep.field), Matrix([[1, -1 - 2 * b ** 2], [0, 1]], rep.field)]
    assert any(P == T for P in (P1, P2) for T in targets)


def test_m004_visible_spheres():
    res = m004_ford()
    assert res.radius_classes == [1.0]
    assert res.eisenstein
    assert all(s.radius_sq.is_one() for s in res.visible)


def test_visible_set_is_lattice_invariant():
    # conjugating by a lattice translation permutes the group, so the visible set modulo the lattice is unchanged
    setup = ford_setup("m004")
    P = setup.cusp[0]
    Pi = P.inverse()
    moved = {k: P * g * Pi for k, g in setup.generators.items()}
    res = m004_ford()
    res2 = partial_ford(moved, setup.cusp, 6, name="m004")
    assert reduced_centres(res) == reduced_centres(res2)
    assert res2.radius_classes == res.radius_classes


def test_svg_is_deterministic(tmp_path):
    res = m004_ford()
    a = emit_prism_svg(res.visible, res.lattice, tmp_path / "a.svg")
    b = emit_prism_svg(res.visible, res.lattice, tmp_path / "b.svg")
    assert a == b == (tmp_path / "a.svg").read_text()
    assert a.startswith("<?xml") and 'version="1.1"' in a
    assert a.count("<circle") > len(res.visible)


def test_empty_svg_has_outline_only():
    text = emit_prism_svg([], m004_ford().lattice)
    assert "<circle" not in text and "<polygon" in text


@settings(max_examples=50)
@given(coords, coords, heights, st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_extension_respects_composition(x, y, t, i, j):
    L, emb, mats = m004_closed_words()
    g, h = mats[i % len(mats)], mats[j % len(mats)]
    z = L(x) + L(y) * i_unit(L)
    lhs = extend_to_h3(g * h, (z, L(t)))
    rhs = extend_to_h3(g, extend_to_h3(h, (z, L(t))))
    assert lhs == rhs
    assert complex(lhs[1]).real > 0
