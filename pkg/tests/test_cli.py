import json

import pytest

from isospec.cli import parse_range, run


@pytest.fixture
def files(tmp_path):
    (tmp_path / "z2.grp").write_text("gens a b\nrel [a,b]\n")
    (tmp_path / "surface2.grp").write_text("gens a b c d\nrel [a,b][c,d]\n")
    return tmp_path


def test_parse_range():
    assert parse_range("4..6") == [4, 5, 6]
    assert parse_range("1,3") == [1, 3]


def test_spectrum_artifact(files):
    out = files / "t.json"
    args = ["spectrum", "--group", str(files / "z2.grp"), "--oracle", "free-abelian:2",
            "--k", "4", "--m", "4..5", "--n", "4..8", "--max-area", "8", "--out", str(out)]
    assert run(args) == 0
    d = json.loads(out.read_text())
    ents = {(e["k"], e["m"], e["n"]): (e["value"], e["status"]) for e in d["entries"]}
    assert ents[(4, 4, 8)] == (4, "Exact")
    assert d["caps"]["max_area"] == 8 and d["backend"] == "free-abelian:2"
    first = out.read_bytes()
    assert run(args) == 0
    assert out.read_bytes() == first


def test_check_sc(files, capsys):
    assert run(["check-sc", "--group", str(files / "surface2.grp"), "--lambda", "1/6"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True


def test_compare(capsys):
    assert run(["compare-spectra", "n/m", "(n/m)^2"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "strictly-below"


def test_usage_errors(files, capsys):
    z2 = str(files / "z2.grp")
    assert run(["spectrum", "--group", z2, "--k", "4", "--m", "1..0", "--n", "4"]) == 2
    assert run(["area", "--group", z2, "--word", "a c"]) == 2
    assert run(["compare-spectra", "log(n)", "n"]) == 2
    assert run(["nonsense"]) == 2
    capsys.readouterr()


def test_domain_errors(capsys):
    assert run(["wreath-cert", "--word", "a t"]) == 1
    assert "iso:" in capsys.readouterr().err


def test_area_and_dehn(files, capsys):
    assert run(["area", "--group", str(files / "z2.grp"), "--oracle", "free-abelian:2", "--sk", "4",
                "--word", "[a^2,b^2]"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["value"] == 4 and d["status"] == "Exact"
    assert run(["dehn-reduce", "--group", str(files / "surface2.grp"), "--word", "[a,b][c,d]"]) == 0
    capsys.readouterr()


def test_geometry_commands(capsys):
    assert run(["detour", "--oracle", "free-abelian:2", "--radius", "6", "--path", "a^4",
                "--at", "2", "--r", "1"]) == 0
    assert "8" in capsys.readouterr().out
    assert run(["delta", "--oracle", "free:2", "--radius", "4", "--interior", "2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["delta"] == 0


def test_families_commands(files, capsys):
    assert run(["aperiodic", "--q", "7", "--length", "8"]) == 0
    assert capsys.readouterr().out.splitlines()[7] == "7,126"
    assert run(["burnside", "--exponent", "2", "--stages", "3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["order"] == 4 and "caps" in d
    assert run(["wreath-cert", "--word", "t a t^-1 a t a t^-1 a"]) == 0
    assert json.loads(capsys.readouterr().out)["area"] == 3


def test_sigma_command(files, capsys):
    from isospec.filling import Derivation, make_factor
    from isospec.words import Alphabet, build_word, format_word

    al = Alphabet(("a", "b"))
    fs = (make_factor((), build_word("[a^3, b]", al)), make_factor(build_word("b^-1", al), build_word("a^-9", al)))
    target = format_word(Derivation((), fs).product(), al)
    spec = {"gens": "a b", "base": ["a^3"], "target": target,
            "factors": [{"conj": format_word(f.conj, al), "rel": format_word(f.relator, al),
                         "sign": f.sign} for f in fs]}
    path = files / "d.json"
    path.write_text(json.dumps(spec))
    assert run(["sigma", "--derivation", str(path), "--p", "3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["verified"] is True and d["mod_p_zero"] is True


def test_jobs_env_override(files, monkeypatch):
    monkeypatch.setenv("ISO_JOBS", "2")
    out = files / "j.json"
    assert run(["spectrum", "--oracle", "free:2", "--k", "2", "--m", "2", "--n", "2..4",
                "--out", str(out)]) == 0
    assert json.loads(out.read_text())["entries"]
