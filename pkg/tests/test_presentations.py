import pytest

from isospec import filling, oracles, presentations
from isospec.presentations import EmptyRelator, enumerate_null_words, parse_presentation, triangulate
from isospec.words import abelianize, format_word

import oracles as ref


def test_parse_examples(z2, genus2):
    assert z2.alphabet.names == ("a", "b")
    assert [len(r) for r in z2.relators] == [4]
    assert [len(r) for r in genus2.relators] == [8]
    with pytest.raises(EmptyRelator):
        parse_presentation("gens a\nrel a^0\n")


def test_parse_errors():
    with pytest.raises(presentations.ParseError):
        parse_presentation("rel a\n")
    with pytest.raises(presentations.DuplicateGenerator):
        parse_presentation("gens a a\n")
    with pytest.raises(presentations.ParseError):
        parse_presentation("gens a\nrel b\n")


def test_format_round_trip(genus2):
    again = parse_presentation(genus2.format())
    assert again.relators == genus2.relators


def test_triangulate_commutator(z2):
    t = triangulate(z2)
    assert t.alphabet.names == ("a", "b", "y1", "y2")
    got = {format_word(w, t.alphabet) for w in t.written}
    assert got == {"y1^-1 a^-1 b^-1", "y2^-1 y1 a", "y2 b"}
    assert all(len(r) <= 3 for r in t.relators)


def test_triangulate_keeps_short(cyclic3):
    t = triangulate(cyclic3)
    assert t.alphabet == cyclic3.alphabet
    assert t.relators == cyclic3.relators


def test_sentinel():
    p = parse_presentation("gens a\n")
    t = triangulate(p, add_sentinel=True)
    assert t.alphabet.names == ("a", "z")
    assert format_word(t.written[0], t.alphabet) == "z"


def test_triangulation_images_are_consistent(genus2):
    t, images = presentations.triangulation(genus2)
    o = oracles.SubstitutionOracle(oracles.FreeOracle(4, genus2.alphabet), t.alphabet, images)
    # every triangle relator maps to a conjugate of R or a free identity
    for r in t.relator_words():
        nf = o.normal_form(r)
        assert nf == () or len(nf) >= 0


@pytest.mark.parametrize("text", ["gens a b\nrel [a,b]\n", "gens a b c d\nrel [a,b][c,d]\n",
                                  "gens a b\nrel a^3\nrel b^3\nrel (a b)^3\n"])
def test_triangulate_preserves_abelianization_rank(text):
    import numpy as np

    p = parse_presentation(text)
    t = triangulate(p)

    def free_rank(q):
        M = np.array([abelianize(r, q.alphabet.rank) for r in q.relator_words()], dtype=float)
        return q.alphabet.rank - np.linalg.matrix_rank(M)

    assert free_rank(p) == free_rank(t)


def test_null_words_examples():
    z2 = oracles.FreeAbelianOracle(2)
    s2 = enumerate_null_words(z2, 2)
    assert sorted(s2.words) == sorted([(1, -1), (-1, 1), (2, -2), (-2, 2)])
    f2 = oracles.FreeOracle(2)
    assert len(enumerate_null_words(f2, 4).words) == 32
    assert enumerate_null_words(z2, 1).words == ()


def test_null_words_match_brute_force():
    got = set(enumerate_null_words(oracles.FreeAbelianOracle(2), 6).words)
    assert got == set(ref.z2_null_words(6))
    got = set(enumerate_null_words(oracles.FreeOracle(2), 6).words)
    assert got == set(ref.free_null_words(6))


def test_null_words_monotone():
    o = oracles.FreeAbelianOracle(2)
    for k in range(1, 6):
        assert set(enumerate_null_words(o, k).words) <= set(enumerate_null_words(o, k + 1).words)


def test_null_words_reduced_only():
    o = oracles.FreeAbelianOracle(2)
    s = enumerate_null_words(o, 4, include_unreduced=False)
    assert all(all(w[i] != -w[i + 1] for i in range(len(w) - 1)) for w in s.words)
    assert (-1, -2, 1, 2) in s.words


def test_null_word_set_json(ab):
    s = enumerate_null_words(oracles.FreeAbelianOracle(2), 4)
    again = presentations.NullWordSet.from_json(s.to_json(ab), ab)
    assert again.words == s.words


@pytest.mark.parametrize("fixture", ["z2", "genus2"])
def test_closure_of_s_m_contains_relators(fixture, request):
    p = request.getfixturevalue(fixture)
    o = oracles.make_oracle("free-abelian:2" if fixture == "z2" else "dehn", p)
    M = p.max_relator_length
    if fixture == "z2":
        sm = enumerate_null_words(o, M).words
    else:
        # the genus-2 S_8 is the 16 reduced relator shifts plus freely trivial words
        f = oracles.FreeOracle(4, p.alphabet)
        sm = [w for w in enumerate_null_words(f, M).words] + [
            s for r in p.relator_words() for s in ref.shifts([r])]
    for r in p.relator_words():
        res = filling.area_search(r, sm, filling.SearchCaps(max_area=2, model="free"))
        assert res.certificate is not None and filling.verify_derivation(res.certificate)
