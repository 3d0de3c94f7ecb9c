"""Exact PSL(2, C) representations of the census manifolds m004, m009, m015."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .linalg import Matrix
from .numfield import NumberField, nf_adjoin, nf_create
from .words import GroupHom, Word, builtin_presentation


@dataclass
class CensusRep:
    name: str
    field: NumberField
    x: Matrix
    y: Matrix
    hom: GroupHom
    constants: dict

    def word(self, text: str) -> Matrix:
        return self.hom.matrix_image(Word.parse(text))


@functools.lru_cache(maxsize=None)
def field_alpha() -> NumberField:
    return nf_create([1, 0, -1, 0, 1], complex(-0.8660254037844386, 0.5), "alpha")


@functools.lru_cache(maxsize=None)
def field_beta_i():
    """Q(i, beta) with beta^4 + beta^2 + 2 = 0; returns (field, beta, i)."""
    B = nf_create([2, 0, 1, 0, 1], complex(0.67609672, 0.97831834), "beta")
    adj = nf_adjoin(B, [1, 0, 1], 1j, name="w")
    return adj.field, adj.embedding(B.gen), adj.root


@functools.lru_cache(maxsize=None)
def field_gamma() -> NumberField:
    return nf_create([1, 0, -1, 1], complex(0.87743883, -0.74486176), "gamma")


@functools.lru_cache(maxsize=None)
def m004() -> CensusRep:
    F = field_alpha()
    a = F.gen
    x = Matrix([[1 - a**2, -a**3], [a**3, a**4 + a**2 + 1]], F)
    # the (1,1) entry of y is 2 a^4 + 2 a^2 + 1
    y = Matrix([[2 * a**4 + 2 * a**2 + 1, 2 * a**3 + a], [-2 * a**3, -2 * a**2 + 1]], F)
    hom = GroupHom(builtin_presentation("m004"), {"x": x, "y": y})
    s = Matrix([[1, 0], [a, 1]], F)
    t = Matrix([[1, a], [0, 1]], F)
    return CensusRep("m004", F, x, y, hom, {"alpha": a, "s": s, "t": t})


@functools.lru_cache(maxsize=None)
def m009() -> CensusRep:
    F, b, i = field_beta_i()
    x = Matrix([[-b**3 - b, i], [-i, b]], F)
    y = Matrix([[-b**3, i], [-i * (b**2 + 1), b]], F)
    hom = GroupHom(builtin_presentation("m009_census"), {"x": x, "y": y})
    q = Matrix([[-i * b, 0], [1, b**-2]], F)
    return CensusRep("m009", F, x, y, hom, {"beta": b, "i": i, "q": q})


@functools.lru_cache(maxsize=None)
def m015() -> CensusRep:
    F = field_gamma()
    g = F.gen
    T = Matrix([[-1, -g], [0, -1]], F)  # y x
    S = Matrix([[1, 0], [g, 1]], F)  # x y x
    x = S * T.inverse()
    y = T * x.inverse()
    hom = GroupHom(builtin_presentation("m015_census"), {"x": x, "y": y})
    return CensusRep("m015", F, x, y, hom, {"gamma": g, "yx": T, "xyx": S})


def census(name: str) -> CensusRep:
    table = {"m004": m004, "m009": m009, "m015": m015}
    if name not in table:
        raise KeyError(f"unknown manifold {name!r}")
    return table[name]()


# peripheral pairs used for the cusp shape (each pair fixes a common point)
CUSP_PAIRS = {
    "m004": ("x^2yx^-1", "x[x,y^-1][x^-1,y^-1]x^-1"),
    "m009": ("xy", "x^-1y^-1x^3y^-1x^-1y"),
    "m015": ("xy", "(xy)^2[x,y^-1]x[y^-1,x]y^-1xy"),
}


def m004_relator_entries():
    """M = x[x,y][y^-1,x^-1]: returns (M12, M21, M11 - M22) at alpha."""
    rep = m004()
    M = rep.word("x[x,y][y^-1,x^-1]")
    return M[0, 1], M[1, 0], M[0, 0] - M[1, 1]


def m004_factored_entries():
    """The factored polynomial expressions for the same entries, evaluated at alpha."""
    a = field_alpha().gen
    p1 = a**4 + a**2 + 1
    p2 = a**4 - a**2 + 1
    m12 = -(a**3) * p1 * p2 * (a**8 - a**4 + 2 * a**2 + 1)
    m21 = a**3 * p1**2 * p2**2
    d = -(a**2) * p1 * p2 * (a**10 + 2 * a**8 - a**6 + 2 * a**4 + a**2 + 2)
    return m12, m21, d
