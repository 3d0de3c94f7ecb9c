import json

import pytest

from crford.cli import ConfigError, RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_census_single_manifold_passes(capsys):
    code, out = run(capsys, "verify-census", "--manifold", "m004", "--json")
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_census_m015_shape_sign_is_reported(capsys):
    code, out = run(capsys, "verify-census", "--manifold", "m015", "--json")
    data = json.loads(out)
    claims = {c["claim"]: c["status"] for c in data["certificates"]}
    assert claims["cusp shape of m015 equals 4(gamma-1)"] == "fail"
    assert claims["cusp lattice of m015 is spanned by 1 and 4(gamma-1)"] == "pass"
    assert code == 1


def test_precision_floor(capsys):
    assert main(["verify-census", "--precision", "32"]) == 3


def test_precision_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CRFORD_PRECISION", "40")
    assert main(["verify-census", "--manifold", "m004"]) == 3
    monkeypatch.setenv("CRFORD_PRECISION", "256")
    code, out = run(capsys, "verify-census", "--manifold", "m004", "--json")
    assert json.loads(out)["config"]["precision_bits"] == 256


def test_word_length_cap():
    with pytest.raises(ConfigError):
        RunConfig("ford-real", word_len=40)
    assert main(["ford-real", "--word-len", "40"]) == 3


def test_build_triangle_outputs(tmp_path, capsys):
    code, _ = run(capsys, "build-triangle", "3", "3", "5", "--out", str(tmp_path))
    assert code == 0
    group = json.loads((tmp_path / "triangle_335.json").read_text())
    assert group["field"]["min_poly"] == [1, 4, 1, 4, 1]
    assert (tmp_path / "build-triangle.json").exists()


def test_build_triangle_unsupported_is_graceful(capsys):
    code, out = run(capsys, "build-triangle", "3", "3", "7", "--json")
    assert code == 1
    assert json.loads(out)["certificates"][0]["witness"]["error"] == "ExtensionFailure"


def test_verify_homs(capsys):
    code, out = run(capsys, "verify-homs", "--json")
    assert code == 0
    assert len(json.loads(out)["certificates"]) == 7


def test_ford_real_is_byte_identical(tmp_path, capsys):
    outs = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        code, _ = run(capsys, "ford-real", "--manifold", "m004", "--word-len", "6", "--out", str(d))
        assert code == 0
        outs.append(((d / "ford-real.json").read_bytes(), (d / "m004_prism.svg").read_bytes()))
    assert outs[0] == outs[1]


def test_ford_real_svg_path(tmp_path, capsys):
    target = tmp_path / "fig.svg"
    code, _ = run(capsys, "ford-real", "--manifold", "m004", "--word-len", "5", "--svg", str(target))
    assert target.read_text().startswith("<?xml")


def test_ford_ch(tmp_path, capsys):
    code, out = run(capsys, "ford-ch", "--json", "--out", str(tmp_path))
    data = json.loads(out)
    assert code == 0
    assert data["status"] == "pass"
    sweep = [c for c in data["certificates"] if "far a-translates" in c["claim"]][0]
    assert sweep["witness"]["M0"] == 3
