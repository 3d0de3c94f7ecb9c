"""Words, finite presentations and homomorphisms into triangle groups.

Triangle words are strings over "123" where "2313" means I2 I3 I1 I3.
Abstract words are sequences of (generator, +-1) letters; commutators use
[a, b] = a b a^-1 b^-1.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .certificate import Certificate, Status
from .linalg import Matrix, is_unipotent, projectively_equal

TRIANGLE_LETTERS = "123"


# ---------------------------------------------------------------------------
# triangle words


def reduce_triangle(word: str) -> str:
    """Cancel adjacent repeated letters (each generator is an involution)."""
    out: list[str] = []
    for ch in word:
        if ch not in TRIANGLE_LETTERS:
            raise ValueError(f"bad triangle letter {ch!r}")
        if out and out[-1] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def invert_triangle(word: str) -> str:
    return word[::-1]


class Word:
    """An abstract word: a freely reduced tuple of (generator, exponent +-1)."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        out: list[tuple[str, int]] = []
        for g, e in letters:
            if e not in (1, -1):
                raise ValueError("letters carry exponent +-1")
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        self.letters = tuple(out)

    @classmethod
    def parse(cls, text: str) -> "Word":
        return _Parser(text).parse()

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def cyclic_reduce(self) -> "Word":
        ls = list(self.letters)
        while len(ls) > 1 and ls[0] == (ls[-1][0], -ls[-1][1]):
            ls = ls[1:-1]
        return Word(ls)

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for g, grp in itertools.groupby(self.letters):
            n = len(list(grp)) * g[1]
            parts.append(g[0] if n == 1 else f"{g[0]}^{n}")
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r})"


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


_SUPERSCRIPTS = str.maketrans({"⁻": "-", "¹": "1", "²": "2", "³": "3", "⁴": "4",
                               "⁵": "5", "⁶": "6", "⁷": "7", "⁸": "8", "⁹": "9", "⁰": "0", "−": "-"})


class _Parser:
    """Recursive descent over: word := factor*, factor := atom ('^' int)?,
    atom := gen | '[' word ',' word ']' | '(' word ')'."""

    def __init__(self, text: str):
        text = text.translate(_SUPERSCRIPTS)
        # superscripts written without caret, e.g. "d-1" after translation
        text = re.sub(r"([A-Za-z\]\)])(-?\d+)", r"\1^\2", text)
        self.s = text.replace(" ", "")
        self.i = 0

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> Word:
        w = self.word()
        if self.i != len(self.s):
            raise ValueError(f"unexpected {self.s[self.i:]!r}")
        return w

    def word(self) -> Word:
        w = Word()
        while self.peek() and self.peek() not in ",])":
            w = w * self.factor()
        return w

    def factor(self) -> Word:
        a = self.atom()
        if self.peek() == "^":
            self.i += 1
            m = re.match(r"-?\d+", self.s[self.i:])
            if not m:
                raise ValueError("exponent expected")
            self.i += m.end()
            a = a ** int(m.group())
        return a

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "[":
            self.i += 1
            u = self.word()
            if self.peek() != ",":
                raise ValueError("',' expected in commutator")
            self.i += 1
            v = self.word()
            if self.peek() != "]":
                raise ValueError("']' expected")
            self.i += 1
            return commutator(u, v)
        if ch == "(":
            self.i += 1
            u = self.word()
            if self.peek() != ")":
                raise ValueError("')' expected")
            self.i += 1
            return u
        if ch.isalpha():
            self.i += 1
            if ch.isupper():
                return Word([(ch.lower(), -1)])
            return Word([(ch, 1)])
        raise ValueError(f"unexpected character {ch!r}")


def parse_relation(text: str) -> Word:
    """'lhs = rhs' becomes lhs^-1 rhs; a bare word is returned as is."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        rhs = rhs.strip()
        r = Word() if rhs in ("", "1", "id") else Word.parse(rhs)
        return Word.parse(lhs).inverse() * r
    return Word.parse(text)


@dataclass
class Presentation:
    name: str
    generators: tuple[str, ...]
    relators: list[Word]
    peripheral: list[tuple[Word, Word]] = field(default_factory=list)

    def __post_init__(self):
        if not self.relators:
            raise ValueError("presentation needs at least one relator")
        for r in self.relators:
            if not r.letters:
                raise ValueError("empty relator")
            if not r.generators() <= set(self.generators):
                raise ValueError(f"relator {r} uses unknown generators")

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.generators)]
        lines += ["relator: " + _word_text(r) for r in self.relators]
        lines += ["peripheral: " + _word_text(u) + " ; " + _word_text(v) for u, v in self.peripheral]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "custom") -> "Presentation":
        gens, rels, per = (), [], []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition(":")
            key = key.strip().lower()
            if key == "generators":
                gens = tuple(val.replace(",", " ").split())
            elif key == "relator":
                rels.append(parse_relation(val))
            elif key == "peripheral":
                u, v = val.split(";")
                per.append((Word.parse(u), Word.parse(v)))
            elif key == "name":
                name = val.strip()
            else:
                raise ValueError(f"unknown line {raw!r}")
        return cls(name, gens, rels, per)


def _word_text(w: Word) -> str:
    return "".join(g if e == 1 else f"{g}^-1" for g, e in w.letters)


def _pres(name, gens, rels, per):
    return Presentation(name, tuple(gens), [parse_relation(r) for r in rels],
                        [(Word.parse(u), Word.parse(v)) for u, v in per])


def builtin_presentation(name: str) -> Presentation:
    table = {
        "m004": ("xy", ["x[x,y][y^-1,x^-1]"], [("xy", "[x,y^-1][x^-1,y^-1]")]),
        "m009_census": ("xy", ["x[x,y]x[x,y^-1]"], [("xy", "x^-1y^-1x^3y^-1x^-1y")]),
        "m015_census": ("xy", ["[x,y^-1]x^3[y,x^-1]y^2"],
                        [("xy", "(xy)^2[x,y^-1]x[y^-1,x]y^-1xy")]),
        "m009": ("ad", ["a^2[a,d][a,d^-1]"], [("[d^-1,a]d", "d^-1a[a,d^-1]a^-1")]),
        "m009_snappy": ("abcd", ["bac=db", "c=ad", "ca^-1bd^-1"],
                        [("b^-1adc^-1d", "d^-1cd^-1bc^-1db^-1")]),
        "m015": ("ab", ["b=ab^2a^-1[b^-2,a^-1]"], [("b^-1a^-1b", "b^-3a^-1b^3a^-1b^-1")]),
        "m015_snappy": ("abcd", ["bad", "cb^-1abd^-1", "cdc^-1a"], [("d^-1c", "b^-1acbd^-1a^-1d")]),
    }
    if name not in table:
        raise KeyError(f"unknown presentation {name!r}; choose from {sorted(table)}")
    gens, rels, per = table[name]
    return _pres(name, gens, rels, per)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass
class GroupHom:
    source: Presentation
    images: Mapping[str, object]  # generator -> triangle word (str) or Matrix

    def __post_init__(self):
        missing = set(self.source.generators) - set(self.images)
        if missing:
            raise ValueError(f"missing images for {sorted(missing)}")
        kinds = {isinstance(v, str) for v in self.images.values()}
        if len(kinds) != 1:
            raise ValueError("images must all be triangle words or all be matrices")
        self.triangle = kinds == {True}

    def word_image(self, w: Word) -> str:
        """Image of an abstract word as a reduced triangle word."""
        if not self.triangle:
            raise TypeError("images are matrices")
        parts = []
        for g, e in w.letters:
            img = self.images[g]
            parts.append(img if e == 1 else invert_triangle(img))
        return reduce_triangle("".join(parts))

    def matrix_image(self, w: Word, G=None) -> Matrix:
        if self.triangle:
            return evaluate(self.word_image(w), G)
        mats = {g: self.images[g] for g in self.source.generators}
        invs = {g: m.inverse() for g, m in mats.items()}
        n = next(iter(mats.values())).n
        M = Matrix.identity(n, next(iter(mats.values())).field)
        for g, e in w.letters:
            M = M * (mats[g] if e == 1 else invs[g])
        return M


def evaluate(word: str, G) -> Matrix:
    """I_{l1} I_{l2} ... in left-to-right order."""
    gens = G.generators
    M = Matrix.identity(3, G.field)
    M.form = G.H
    for ch in word:
        M = M * gens[int(ch) - 1]
    M.form = G.H
    return M


def _scalar_root_of_unity(M: Matrix):
    lam = M.is_scalar()
    if lam is None:
        return None
    order = 3 if M.n == 3 else 2
    return lam if (lam ** order).is_one() else None


def verify_homomorphism(h: GroupHom, G=None) -> Certificate:
    rows = []
    ok = True
    for r in h.source.relators:
        M = h.matrix_image(r, G)
        lam = _scalar_root_of_unity(M)
        passed = lam is not None
        ok &= passed
        row = {"relator": str(r), "pass": passed, "scalar": None if lam is None else [str(c) for c in lam.coeffs]}
        if h.triangle:
            row["image_word"] = h.word_image(r)
        rows.append(row)
    return Certificate(
        claim=f"homomorphism from pi1({h.source.name})",
        inputs={"images": {g: (v if isinstance(v, str) else "matrix") for g, v in h.images.items()}},
        status=Status.PASS if ok else Status.FAIL,
        witness={"relators": rows},
    )


def _as_unipotent(M: Matrix):
    """M itself or -M (2x2) when unipotent, else None."""
    if is_unipotent(M):
        return M
    if M.n == 2 and is_unipotent(-M):
        return -M
    return None


def cyclic_generator(U: Matrix, V: Matrix, bound: int = 6):
    """Find coprime (m, n) with U^n = V^m projectively and g = U^s V^t, s m + t n = 1."""
    def signed(k):
        return [k, -k] if k else [0]

    for total in range(1, 2 * bound + 1):
        for m_abs in range(0, min(total, bound) + 1):
            n_abs = total - m_abs
            if n_abs > bound:
                continue
            for m in signed(m_abs):
                for n in signed(n_abs):
                    if math.gcd(m, n) != 1:
                        continue
                    if not projectively_equal(U ** n, V ** m):
                        continue
                    s, t = _bezout(m, n)
                    g = (U ** s) * (V ** t)
                    if projectively_equal(g ** m, U) and projectively_equal(g ** n, V):
                        return m, n, s, t, g
    return None


def _bezout(m: int, n: int):
    old_r, r = m, n
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def power_of(M: Matrix, R: Matrix, bound: int = 6) -> int | None:
    """k with M = R^k projectively, |k| <= bound."""
    P, Pi = Matrix.identity(R.n, R.field), Matrix.identity(R.n, R.field)
    Ri = R.inverse()
    if projectively_equal(M, P):
        return 0
    for k in range(1, bound + 1):
        P, Pi = P * R, Pi * Ri
        if projectively_equal(M, P):
            return k
        if projectively_equal(M, Pi):
            return -k
    return None


def peripheral_analysis(h: GroupHom, G=None, bound: int = 6, reference: str | None = None) -> Certificate:
    """Peripheral images, unipotency and a common cyclic generator.

    With ``reference`` (a triangle word such as "2313") each image is also
    expressed as a power of the reference element when possible."""
    pairs = []
    all_ok = True
    for u, v in h.source.peripheral:
        U, V = h.matrix_image(u, G), h.matrix_image(v, G)
        entry = {"u": str(u), "v": str(v)}
        if h.triangle:
            entry["u_image"] = h.word_image(u)
            entry["v_image"] = h.word_image(v)
        uu, vu = is_unipotent(U), is_unipotent(V)
        entry["u_unipotent"] = bool(uu) or (U.n == 2 and bool(is_unipotent(-U)))
        entry["v_unipotent"] = bool(vu) or (V.n == 2 and bool(is_unipotent(-V)))
        if reference is not None:
            R = evaluate(reference, G)
            entry["u_power_of_reference"] = power_of(U, R, bound)
            entry["v_power_of_reference"] = power_of(V, R, bound)
        if U.is_scalar() is not None and V.is_scalar() is not None:
            entry["kind"] = "degenerate"
            all_ok = False
            pairs.append(entry)
            continue
        found = cyclic_generator(U, V, bound)
        if found is None:
            entry["kind"] = "not cyclic"
            all_ok = False
        else:
            m, n, s, t, g = found
            entry.update({"m": m, "n": n, "generator": f"u^{s} v^{t}"})
            gu = _cube_scaled_unipotent(g)
            entry["kind"] = "cyclic unipotent" if gu else "cyclic"
            all_ok &= bool(gu)
        pairs.append(entry)
    return Certificate(
        claim=f"peripheral holonomy of pi1({h.source.name})",
        inputs={},
        status=Status.PASS if all_ok else Status.FAIL,
        witness={"pairs": pairs},
    )


def _cube_scaled_unipotent(g: Matrix) -> bool:
    if is_unipotent(g):
        return True
    if g.n == 2:
        return bool(is_unipotent(-g))
    # scalar cube roots of unity inside the field
    F = g.field
    for lam in F.roots_of([F(-1), F(0), F(0), F(1)]):
        if not lam.is_one() and is_unipotent(g * lam):
            return True
    return False


# ---------------------------------------------------------------------------
# enumeration


def projective_key(M: Matrix):
    """Canonical representative of M up to scalars: first nonzero entry made 1."""
    for r in M.rows:
        for v in r:
            if not v.is_zero():
                inv = v.inverse()
                return tuple(tuple((x * inv).nums + ((x * inv).den,) for x in row) for row in M.rows)
    raise ValueError("zero matrix")


def shortlex_key(w: str):
    return (len(w), w)


def enumerate_words(G, max_len: int, even_only: bool = False, cap: int = 16,
                    generators: Sequence[Matrix] | None = None):
    """Shortlex breadth-first enumeration with projective deduplication.

    Returns a list of (word, matrix), one per projective class, in shortlex order.
    """
    if max_len > cap:
        raise ValueError(f"max_len {max_len} exceeds cap {cap}")
    gens = G.generators
    ident = Matrix.identity(3, G.field)
    seen = {projective_key(ident): ""}
    out = [("", ident)]
    frontier = [("", ident)]
    for length in range(1, max_len + 1):
        nxt = []
        for w, M in frontier:
            for ch in TRIANGLE_LETTERS:
                if w and w[-1] == ch:
                    continue
                W = w + ch
                N = M * gens[int(ch) - 1]
                k = projective_key(N)
                if k in seen:
                    continue
                seen[k] = W
                nxt.append((W, N))
        nxt.sort(key=lambda p: p[0])
        out.extend(nxt)
        frontier = nxt
    if even_only:
        out = [p for p in out if len(p[0]) % 2 == 0]
    for _, M in out:
        M.form = G.H
    return out


def enumerate_even_words(G, max_len: int, cap: int = 16):
    return enumerate_words(G, max_len, even_only=True, cap=cap)


# ---------------------------------------------------------------------------
# conjugacy witness


def _search_word(targets: Mapping[str, Matrix], gens: Mapping[str, Matrix], G, max_len: int = 8):
    """BFS over products of generators and inverses; returns target -> word."""
    letters = []
    for g, M in gens.items():
        letters.append(((g, 1), M))
        letters.append(((g, -1), M.inverse()))
    found: dict[str, Word] = {}
    n = next(iter(gens.values())).n
    start = Matrix.identity(n, G.field if G is not None else next(iter(gens.values())).field)
    seen = {projective_key(start)}
    frontier = [(Word(), start)]
    for name, T in targets.items():
        if projectively_equal(start, T):
            found[name] = Word()
    for _ in range(max_len):
        if len(found) == len(targets):
            break
        nxt = []
        for w, M in frontier:
            for (g, e), L in letters:
                if w.letters and w.letters[-1] == (g, -e):
                    continue
                N = M * L
                k = projective_key(N)
                if k in seen:
                    continue
                seen.add(k)
                W = Word(w.letters + ((g, e),))
                for name, T in targets.items():
                    if name not in found and projectively_equal(N, T):
                        found[name] = W
                nxt.append((W, N))
        frontier = nxt
    return found


def conjugacy_witness(h1: GroupHom, h2: GroupHom, G, max_len: int = 8) -> Certificate:
    targets = {"12": evaluate("12", G), "23": evaluate("23", G)}
    witness = {}
    ok = True
    for label, h in (("h1", h1), ("h2", h2)):
        gens = {g: h.matrix_image(Word([(g, 1)]), G) for g in h.source.generators}
        found = _search_word(targets, gens, G, max_len)
        entry = {}
        for t in targets:
            if t in found:
                w = found[t]
                entry[t] = {"word": str(w), "image": h.word_image(w) if h.triangle else None}
            else:
                entry[t] = None
                ok = False
        witness[label] = {"source": h.source.name, "expressions": entry}
    return Certificate(
        claim="image groups both contain 12 and 23, hence equal the even subgroup",
        inputs={"max_len": max_len},
        status=Status.PASS if ok else Status.UNDECIDED,
        witness=witness,
    )


# ---------------------------------------------------------------------------
# the two homomorphisms onto the (3,3,5; infinity) even subgroup


def hom_m009() -> GroupHom:
    return GroupHom(builtin_presentation("m009"), {"a": "2132", "d": "1232"})


def hom_m015() -> GroupHom:
    return GroupHom(builtin_presentation("m015"), {"a": "2313", "b": "1313"})


def induced_snappy_hom(h: GroupHom) -> GroupHom:
    """Extend a simplified two-generator hom to the four-generator presentation."""
    name = h.source.name
    A = h.images
    if name == "m009":
        a, d = A["a"], A["d"]
        c = reduce_triangle(a + d)
        b = reduce_triangle(a + invert_triangle(d) + invert_triangle(a) + d)
        return GroupHom(builtin_presentation("m009_snappy"), {"a": a, "b": b, "c": c, "d": d})
    if name == "m015":
        a, b = A["a"], A["b"]
        d = reduce_triangle(invert_triangle(a) + invert_triangle(b))
        c = reduce_triangle(d + invert_triangle(b) + invert_triangle(a) + b)
        return GroupHom(builtin_presentation("m015_snappy"), {"a": a, "b": b, "c": c, "d": d})
    raise KeyError(name)
