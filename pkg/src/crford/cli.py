"""Command line interface: crford <command> [options]."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .certificate import Certificate, CertificateBundle, Status

EXIT_CODES = {Status.PASS: 0, Status.FAIL: 1, Status.UNDECIDED: 2}
EXIT_CONFIG = 3
WORD_LEN_CAP = 12
MANIFOLDS = ("m004", "m009", "m015")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    precision_bits: int = 128
    word_len: int = 8
    output_dir: str | None = None
    manifold: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ConfigError("precision must be at least 64 bits")
        if not 1 <= self.word_len <= WORD_LEN_CAP:
            raise ConfigError(f"word length must be in 1..{WORD_LEN_CAP}")
        if self.manifold is not None and self.manifold not in MANIFOLDS:
            raise ConfigError(f"unknown manifold {self.manifold!r}")

    def snapshot(self) -> dict:
        data = asdict(self)
        data.pop("output_dir")
        return data


def _bundle(config: RunConfig) -> CertificateBundle:
    return CertificateBundle(config=config.snapshot(), version=__version__)


# ---------------------------------------------------------------------------
# census


def _expected_shape(name: str):
    from . import census

    rep = census.census(name)
    F = rep.field
    if name == "m015":
        g = rep.constants["gamma"]
        return (g - 1) * 4, "4(gamma-1)"
    square = {"m004": -12, "m009": -7}[name]
    roots = [r for r in F.roots_of([F(-square), F(0), F(1)]) if complex(r).imag > 0]
    return roots[0], {"m004": "2i*sqrt(3)", "m009": "i*sqrt(7)"}[name]


def census_certificates(name: str) -> list[Certificate]:
    from . import census
    from .linalg import PSL2Class, classify_psl2
    from .realford import cusp_shape, lattice_equivalent
    from .words import verify_homomorphism

    rep = census.census(name)
    certs = [verify_homomorphism(rep.hom)]
    certs[0].claim = f"relator of pi1({name}) maps to a scalar matrix"
    u, v = census.CUSP_PAIRS[name]
    P1, P2 = rep.word(u), rep.word(v)
    kinds = [classify_psl2(P).value for P in (P1, P2)]
    commute = P1 * P2 == P2 * P1
    certs.append(Certificate(
        claim=f"peripheral pair of {name} is parabolic and commuting",
        inputs={"u": u, "v": v},
        status=Status.PASS if kinds == [PSL2Class.PARABOLIC.value] * 2 and commute else Status.FAIL,
        witness={"classes": kinds, "commute": commute},
    ))
    shape = cusp_shape(P1, P2)
    expected, label = _expected_shape(name)
    certs.append(Certificate(
        claim=f"cusp shape of {name} equals {label}",
        inputs={"u": u, "v": v},
        status=Status.PASS if shape == expected else Status.FAIL,
        witness={"shape": shape, "expected": expected, "approx": repr(complex(shape))},
    ))
    certs.append(Certificate(
        claim=f"cusp lattice of {name} is spanned by 1 and {label}",
        inputs={},
        status=Status.PASS if lattice_equivalent(shape, expected) else Status.FAIL,
        witness={"shape": shape},
    ))
    if name == "m004":
        entries = census.m004_relator_entries()
        factored = census.m004_factored_entries()
        ok = all(e.is_zero() for e in entries) and all(f.is_zero() for f in factored)
        certs.append(Certificate(
            claim="M12, M21 and M11 - M22 of the m004 relator vanish at alpha",
            inputs={"relator": "x[x,y][y^-1,x^-1]"},
            status=Status.PASS if ok else Status.FAIL,
            witness={"entries": list(entries), "factored": list(factored)},
        ))
    return certs


def cmd_verify_census(config: RunConfig) -> CertificateBundle:
    bundle = _bundle(config)
    for name in ([config.manifold] if config.manifold else MANIFOLDS):
        for c in census_certificates(name):
            bundle.add(c)
    return bundle


# ---------------------------------------------------------------------------
# triangle groups


def group_to_json(G) -> dict:
    return {
        "field": G.field.to_json(),
        "form": G.H.to_json(),
        "generators": [g.to_json() for g in G.generators],
        "conjugator": None if G.conjugator is None else G.conjugator.to_json(),
    }


def triangle_certificates(p: int, q: int, r: int):
    from .linalg import Matrix, signature, standard_form_J
    from .triangle import A_STANDARD, accidental_group, conjugate_to_standard

    G = accidental_group(p, q, r)
    phi = G.params.phi
    F = G.field
    H = Matrix(G.H.rows, F)
    tr = G.evaluate("2313").trace()
    sig = signature(G.H)
    certs = [
        Certificate(f"phi for ({p},{q},{r}; infinity)", {"p": p, "q": q, "r": r}, Status.PASS,
                    {"phi_field_min_poly": list(F.min_poly), "phi": phi, "approx": repr(complex(phi))}),
        Certificate("trace(I2 I3 I1 I3) = 3", {}, Status.PASS if tr == 3 else Status.FAIL, {"trace": tr}),
        Certificate("signature of H is (2,1)", {}, Status.PASS if sig == (2, 1) else Status.FAIL,
                    {"signature": list(sig), "det": H.det()}),
    ]
    Q, Gt = conjugate_to_standard(G)
    J = Matrix(standard_form_J(F).rows, F)
    ok_form = Q.conj_transpose() * H * Q == J
    a = Gt.evaluate("2313")
    certs.append(Certificate("Q^* H Q = J and a = 2313 is lower triangular", {"method": G.notes.get("conjugator")},
                             Status.PASS if ok_form and a == Matrix(A_STANDARD, F) else Status.FAIL,
                             {"Q": Q, "a": a}))
    return G, Gt, certs


def cmd_build_triangle(config: RunConfig) -> CertificateBundle:
    from .numfield import NumberFieldError

    p, q, r = config.options["triangle"]
    bundle = _bundle(config)
    try:
        G, Gt, certs = triangle_certificates(p, q, r)
    except NumberFieldError as exc:
        bundle.add(Certificate(f"accidental parabolic for ({p},{q},{r})", {"p": p, "q": q, "r": r},
                               Status.FAIL, {"error": type(exc).__name__, "message": str(exc)}))
        return bundle
    for c in certs:
        bundle.add(c)
    if config.output_dir:
        path = Path(config.output_dir) / f"triangle_{p}{q}{r}.json"
        path.write_text(json.dumps(group_to_json(Gt), indent=2, sort_keys=True) + "\n")
    return bundle


# ---------------------------------------------------------------------------
# homomorphisms


def cmd_verify_homs(config: RunConfig) -> CertificateBundle:
    from .triangle import standard_335
    from .words import (conjugacy_witness, hom_m009, hom_m015, induced_snappy_hom, peripheral_analysis,
                        verify_homomorphism)

    G = standard_335()
    bundle = _bundle(config)
    h9, h15 = hom_m009(), hom_m015()
    for h in (h9, h15):
        bundle.add(verify_homomorphism(h, G))
        bundle.add(verify_homomorphism(induced_snappy_hom(h), G))
        bundle.add(peripheral_analysis(h, G, reference="2313"))
    bundle.add(conjugacy_witness(h9, h15, G))
    return bundle


# ---------------------------------------------------------------------------
# Ford domains


def cmd_ford_real(config: RunConfig) -> CertificateBundle:
    from .realford import emit_prism_svg, ford_domain

    bundle = _bundle(config)
    expected = {"m004": 1, "m009": 3, "m015": 3}
    for name in ([config.manifold] if config.manifold else MANIFOLDS):
        res = ford_domain(name, config.word_len)
        witness = {
            "radii": [repr(x) for x in res.radius_classes],
            "radius_squared": res.radii_sq,
            "visible": [{"word": s.word, "center": s.center, "radius_squared": s.radius_sq} for s in res.visible],
            "visible_per_depth": {str(k): v for k, v in sorted(res.depth_counts.items())},
            "stable_from_depth": res.stable_from,
        }
        ok = res.distinct_radii == expected[name]
        if name == "m004":
            witness["eisenstein"] = res.eisenstein
            ok = ok and bool(res.eisenstein)
        bundle.add(Certificate(f"visible isometric spheres of {name} have {expected[name]} distinct radii",
                               {"manifold": name, "word_len": config.word_len},
                               Status.PASS if ok else Status.FAIL, witness))
        svg = config.options.get("svg")
        if svg and config.manifold:
            target = Path(svg)
        elif svg or config.output_dir:
            target = Path(svg or config.output_dir) / f"{name}_prism.svg"
            target.parent.mkdir(parents=True, exist_ok=True)
        else:
            continue
        emit_prism_svg(res.visible, res.lattice, target)
    return bundle


def cmd_ford_ch(config: RunConfig) -> CertificateBundle:
    from . import chford
    from .triangle import standard_335

    G = standard_335()
    bundle = _bundle(config)
    bundle.add(chford.verify_side_pairing_table(G))
    sweep = chford.disjointness_sweep(G, bits=config.precision_bits)
    bundle.add(sweep.certificate)
    report = None
    if config.options.get("numeric"):
        report = chford.numeric_face_combinatorics(1, G, depth=config.options.get("depth") or sweep.m0 + 1,
                                                   expected=(2, 3, 7))
        bundle.add(report.certificate)
        neighbours = report.neighbours
    else:
        neighbours = [s for s, _ in chford.SIDE_PAIRING_ROWS]
    relations = set()
    for l in neighbours:
        cyc = chford.trace_ridge_cycle(1, l, G)
        cert = cyc.certificate
        cert.witness["follows_from_basic_relations"] = chford.follows_from_basic_relations(cyc.relator)
        if cyc.reduced is not None and cyc.reduced[1]:
            relations.add(f"({cyc.reduced[0]})^{cyc.reduced[1]}")
        bundle.add(cert)
    bundle.add(Certificate("ridge cycles through b1 recover the relations (12)^3, (23)^3, (13)^5", {},
                           Status.PASS if relations >= {"(12)^3", "(23)^3", "(13)^5"} else Status.FAIL,
                           {"relations": sorted(relations)}))
    bundle.add(chford.vertex_cycle_check(G))
    _, pres_cert = chford.presentation_of_gamma(G)
    bundle.add(pres_cert)
    if report is not None and config.output_dir:
        path = Path(config.output_dir) / "adjacency_b1.json"
        path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return bundle


COMMANDS = {
    "verify-census": cmd_verify_census,
    "build-triangle": cmd_build_triangle,
    "verify-homs": cmd_verify_homs,
    "ford-real": cmd_ford_real,
    "ford-ch": cmd_ford_ch,
}


def build_parser() -> argparse.ArgumentParser:
    default_prec = int(os.environ.get("CRFORD_PRECISION", "128"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=default_prec, help="working precision in bits")
    common.add_argument("--out", help="output directory for bundles and figures")
    common.add_argument("--json", action="store_true", help="print the certificate bundle to stdout")
    parser = argparse.ArgumentParser(prog="crford", description=__doc__)
    parser.add_argument("--version", action="version", version=f"crford {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify-census", parents=[common])
    p.add_argument("--manifold", choices=MANIFOLDS)
    p = sub.add_parser("build-triangle", parents=[common])
    p.add_argument("p", type=int, nargs="?", default=3)
    p.add_argument("q", type=int, nargs="?", default=3)
    p.add_argument("r", type=int, nargs="?", default=5)
    sub.add_parser("verify-homs", parents=[common])
    p = sub.add_parser("ford-real", parents=[common])
    p.add_argument("--manifold", choices=MANIFOLDS)
    p.add_argument("--word-len", type=int, default=8)
    p.add_argument("--svg", help="SVG path (single manifold) or directory")
    p = sub.add_parser("ford-ch", parents=[common])
    p.add_argument("--depth", type=int, help="a-power range for numeric neighbour candidates")
    p.add_argument("--numeric", action="store_true", help="run the numeric face pass")
    return parser


def make_config(args) -> RunConfig:
    options = {}
    if args.command == "build-triangle":
        options["triangle"] = [args.p, args.q, args.r]
    if args.command == "ford-real" and args.svg:
        options["svg"] = args.svg
    if args.command == "ford-ch":
        options["numeric"] = bool(args.numeric)
        options["depth"] = args.depth
    return RunConfig(
        command=args.command,
        precision_bits=args.precision,
        word_len=getattr(args, "word_len", 8),
        output_dir=args.out,
        manifold=getattr(args, "manifold", None),
        options=options,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        if config.output_dir:
            Path(config.output_dir).mkdir(parents=True, exist_ok=True)
        bundle = COMMANDS[config.command](config)
    except (ConfigError, OSError) as exc:
        print(f"crford: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = bundle.dumps()
    if config.output_dir:
        (Path(config.output_dir) / f"{config.command}.json").write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for c in bundle.certificates:
            print(f"[{Status(c.status).value:9}] {c.claim}")
        print(f"overall: {bundle.status.value}")
    return EXIT_CODES[bundle.status]


if __name__ == "__main__":
    sys.exit(main())
