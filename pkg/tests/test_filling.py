import pytest
from hypothesis import given, settings, strategies as st

from isospec import filling, oracles
from isospec.filling import (
    CapsUnsound,
    Derivation,
    RangeError,
    SearchCaps,
    Status,
    area_search,
    make_factor,
    spectrum_table,
    verify_derivation,
)
from isospec.presentations import enumerate_null_words

import oracles as ref

COMM = (-1, -2, 1, 2)


@pytest.fixture(scope="module")
def s4():
    return enumerate_null_words(oracles.FreeAbelianOracle(2), 4).words


def test_area_examples(s4):
    assert area_search(COMM, s4).value == 1
    r = area_search((-1, -1, -2, -2, 1, 1, 2, 2), s4)
    assert r.exact and r.value == 4
    assert verify_derivation(r.certificate) and r.certificate.area == 4
    assert area_search((), s4).value == 0
    assert area_search((1, 2), s4).status is Status.NOT_IN_CLOSURE


def test_free_model_example():
    rels = [(1, 1, 1)]
    assert area_search((1,) * 6, rels, SearchCaps(model="free")).value == 2


def test_unsound_caps():
    with pytest.raises(CapsUnsound):
        area_search(COMM, [COMM], SearchCaps(max_area=3, max_length=4), require_exact=True)


def test_lower_bound_when_capped(s4):
    r = area_search((-1, -1, -2, -2, 1, 1, 2, 2), s4, SearchCaps(max_area=2))
    assert r.status is Status.LOWER and r.value == 3


@pytest.mark.parametrize("w", [(1, 1, 1, -1, -1, -1), (1, 2, -1, -2), (1, 2, 1, -2, -1, -1)])
def test_paid_area_matches_bfs(w, s4):
    got = area_search(w, s4).value
    assert got == ref.paid_area_bfs(w, s4, 6)


def test_derivation_algebra():
    f = make_factor((2,), COMM)
    d = Derivation(f.expand(), (f,))
    assert verify_derivation(d)
    assert verify_derivation(d.inverted())
    assert verify_derivation(d.conjugated((1, 2)))
    assert verify_derivation(d.then(d.inverted()))
    bad = Derivation((1,), (f,))
    assert not verify_derivation(bad)


def test_derivation_json_round_trip():
    from isospec.words import Alphabet

    ab = Alphabet(("a", "b"))
    f = make_factor((2, 1), COMM)
    d = Derivation(f.expand(), (f,))
    again = Derivation.from_json(d.to_json(ab), ab)
    assert again == d


def test_spectrum_examples():
    z = spectrum_table(oracles.FreeAbelianOracle(2), 4, [4], [8])
    e = z.get(4, 4, 8)
    assert (e.value, e.status) == (4, Status.EXACT)
    f = spectrum_table(oracles.FreeOracle(2), 2, [2], [6])
    assert f.get(2, 2, 6).value == 3
    with pytest.raises(RangeError):
        spectrum_table(oracles.FreeAbelianOracle(2), 4, [3], [4])


def test_spectrum_monotone_and_round_trips():
    t = spectrum_table(oracles.FreeAbelianOracle(2), [4], [4, 5, 6], range(0, 9, 2))
    assert not t.monotonicity_violations()
    again = filling.SpectrumTable.from_json(t.to_json())
    assert [e.value for e in again.entries] == [e.value for e in t.entries]
    assert again.caps == t.caps


@settings(max_examples=30)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4), st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4))
def test_area_subadditive(u, v):
    from isospec.words import abelianize

    s4 = enumerate_null_words(oracles.FreeAbelianOracle(2), 4).words
    # close u and v into trivial words by appending their abelian inverse
    def close(x):
        ea, eb = abelianize(tuple(x), 2)
        return tuple(x) + (-1 if ea > 0 else 1,) * abs(ea) + (-2 if eb > 0 else 2,) * abs(eb)

    w1, w2 = close(u), close(v)
    a1, a2, a12 = (area_search(w, s4, SearchCaps(max_area=10)) for w in (w1, w2, w1 + w2))
    if a1.exact and a2.exact and a12.exact:
        assert a12.value <= a1.value + a2.value


def test_linearity_probe():
    t = spectrum_table(oracles.FreeOracle(2), [2], [2, 4], [2, 4, 6])
    verdict = filling.linearity_probe(t)
    assert verdict.C is not None
    with pytest.raises(filling.InsufficientData):
        filling.linearity_probe(filling.SpectrumTable("x", [], SearchCaps()))


def test_a25m_rejects_long_relators():
    from isospec.presentations import parse_presentation

    p = parse_presentation("gens a b\nrel [a,b]\n")
    with pytest.raises(ValueError):
        filling.check_A25m(p, 4, [1], oracle=oracles.FreeAbelianOracle(2))


@settings(max_examples=25)
@given(st.lists(st.tuples(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3),
                          st.sampled_from([COMM, (1, 2, -1, -2)])), min_size=1, max_size=3))
def test_certificates_verify_for_random_products(spec):
    fs = tuple(make_factor(tuple(g), r) for g, r in spec)
    target = Derivation((), fs).product()
    r = area_search(target, [COMM], SearchCaps(max_area=len(fs), model="free"))
    assert r.certificate is not None and verify_derivation(r.certificate)
    assert r.value <= len(fs)


def test_find_certificate():
    d = filling.find_certificate((-1, -1, -2, -2, 1, 1, 2, 2), [COMM])
    assert d is not None and verify_derivation(d)
