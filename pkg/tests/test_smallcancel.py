from fractions import Fraction

import pytest

from isospec import smallcancel as sc
from isospec.filling import verify_derivation
from isospec.presentations import parse_presentation

G2 = "gens a b c d\nrel [a,b][c,d]\n"


def test_metric_condition_examples():
    g2 = parse_presentation(G2)
    assert sc.check_metric_condition(g2, Fraction(1, 6)).passed
    z2 = parse_presentation("gens a b\nrel [a,b]\n")
    rep = sc.check_metric_condition(z2, Fraction(1, 6))
    assert not rep.passed and rep.witness is not None
    assert "witness" in rep.to_json(z2.alphabet)


def test_metric_condition_monotone_in_lambda():
    for text in (G2, "gens a b\nrel [a,b]\n", "gens a b\nrel a b a b^-1 a^-1\n"):
        p = parse_presentation(text)
        res = [sc.check_metric_condition(p, Fraction(i, 12)).passed for i in range(1, 13)]
        # passing at lam implies passing at every larger lam
        assert res == sorted(res)


def test_metric_condition_errors():
    # the parser stores cyclically reduced relators
    p = parse_presentation("gens a b\nrel a b a^-1\n")
    assert sc.check_metric_condition(p, Fraction(1, 2)).passed
    with pytest.raises(ValueError):
        sc.check_metric_condition(parse_presentation(G2), 0)


def test_dehn_fill_relator_and_conjugate():
    p = parse_presentation(G2)
    r = p.relator_words()[0]
    d = sc.dehn_fill(p, r)
    assert d is not None and d.area == 1 and verify_derivation(d)
    w = (2,) + r + r + (-2,)
    d = sc.dehn_fill(p, w)
    assert d is not None and verify_derivation(d) and d.area <= len(w)
    assert sc.dehn_fill(p, (1, 2)) is None


def test_dehn_reduce_shortens():
    p = parse_presentation(G2)
    r = p.relator_words()[0]
    w = r[:5]
    red, steps = sc.dehn_reduce(p, w)
    assert len(red) == 3 and len(steps) == 1


def test_greendlinger_none_on_geodesics():
    p = parse_presentation(G2)
    assert sc.greendlinger_step(p, (1, 2, 3)) is None


def test_hyperbolicity_bound_positive():
    assert sc.hyperbolicity_bound(parse_presentation(G2)) > 0
