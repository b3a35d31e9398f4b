import pytest
from hypothesis import given, strategies as st

from isospec import spectra
from isospec.spectra import MonomialSpectrum, UnsupportedForm, compare_monomials, numeric_falsify, precedes


def test_examples():
    assert compare_monomials("n/m", "(n/m)^2") == "strictly-below"
    assert compare_monomials("(n/m)^2", "(n/m)^3") == "strictly-below"
    # n and n/m are not equivalent; only n/m <= n holds
    assert compare_monomials("n", "n/m") == "strictly-above"
    assert compare_monomials("1", "n/m") == "equivalent"
    assert precedes("k", "1") is False and precedes("1", "k")


def test_refutations_found_when_decision_says_no():
    assert numeric_falsify("n", "n/m", 20) is not None
    assert numeric_falsify("(n/m)^2", "n/m", 20) is not None


def test_parse():
    f = MonomialSpectrum.parse("k^2 n^3 / m")
    assert (f.alpha, f.beta, f.gamma) == (2, 1, 3)
    assert str(MonomialSpectrum.parse("(n/m)^2")) == "n^2 / m^2"
    with pytest.raises(UnsupportedForm):
        MonomialSpectrum.parse("log(n)")
    with pytest.raises(UnsupportedForm):
        MonomialSpectrum.parse("m")
    with pytest.raises(UnsupportedForm):
        MonomialSpectrum.parse("2 n")


exps = st.fractions(min_value=0, max_value=3, max_denominator=2)


@given(exps, exps, exps)
def test_reflexive(a, b, c):
    f = MonomialSpectrum(a, b, c)
    assert precedes(f, f)


@given(exps, exps, exps, exps, exps, exps)
def test_falsifier_never_contradicts_decision(a, b, c, x, y, z):
    f, g = MonomialSpectrum(a, b, c), MonomialSpectrum(x, y, z)
    if precedes(f, g):
        assert numeric_falsify(f, g) is None


@given(exps, exps, exps, exps, exps, exps, exps, exps, exps)
def test_transitive(a, b, c, d, e, f_, g, h, i):
    f1, f2, f3 = MonomialSpectrum(a, b, c), MonomialSpectrum(d, e, f_), MonomialSpectrum(g, h, i)
    if precedes(f1, f2) and precedes(f2, f3):
        assert precedes(f1, f3)


def test_verdict_json():
    import json

    d = json.loads(spectra.verdict_json("n/m", "(n/m)^2"))
    assert d["verdict"] == "strictly-below"
