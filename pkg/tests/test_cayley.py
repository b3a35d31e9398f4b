import numpy as np
import pytest

from isospec import cayley, oracles
from isospec.filling import Derivation, make_factor, verify_derivation
from isospec.words import build_word


@pytest.fixture(scope="module")
def f2():
    return cayley.build_ball(oracles.FreeOracle(2), 4)


@pytest.fixture(scope="module")
def z2():
    return cayley.build_ball(oracles.FreeAbelianOracle(2), 6)


def test_ball_sizes(f2, z2):
    # 1 + 4 (3^R - 1) / 2 and the l1 ball 2R^2 + 2R + 1
    assert len(f2) == 1 + 2 * (3 ** 4 - 1)
    assert len(z2) == 2 * 36 + 12 + 1
    assert f2.n_edges == len(f2) - 1


def test_depth_is_distance_from_identity(z2):
    assert (z2.dist[0] == z2.depth).all()
    assert all(len(r) == d for r, d in zip(z2.reps, z2.depth))


def test_ball_too_large():
    with pytest.raises(cayley.BallTooLarge):
        cayley.build_ball(oracles.FreeOracle(2), 6, max_vertices=100)


def test_geodesic_is_lex_least(z2):
    v = z2.vertex((2, 1))
    g = z2.geodesic(0, v)
    assert g.letters == (1, 1, 2)


def test_expansion_law(z2):
    d0 = z2.dist
    inner = np.nonzero(z2.depth <= 3)[0]
    for s in (2, 3):
        ds = cayley.s_expand(z2, s).dist
        sub = np.ix_(inner, inner)
        assert (ds[sub] == np.ceil(d0[sub] / s)).all()


def test_delta_examples(f2):
    assert cayley.estimate_delta(f2, 2).delta == 0
    z = cayley.build_ball(oracles.FreeAbelianOracle(2), 4)
    assert cayley.estimate_delta(z, 2).delta == 2
    with pytest.raises(ValueError):
        cayley.estimate_delta(f2, 3)


def test_delta_is_half_integer():
    z = cayley.build_ball(oracles.FreeAbelianOracle(2), 4)
    e = cayley.s_expand(z, 2)
    d = cayley.estimate_delta(e, 2).delta
    assert (2 * d).denominator == 1 and d >= 0


def test_detour_examples(z2):
    p = z2.walk(0, build_word("a^4", z2.oracle.alphabet))
    o = p.vertices[2]
    assert cayley.min_detour(z2, p, o, 1) == 8
    assert cayley.min_detour(z2, p, o, 2) is None
    f = cayley.build_ball(oracles.FreeOracle(2), 4)
    q = f.walk(0, (1, 1, 1, 1))
    assert cayley.min_detour(f, q, q.vertices[2], 1) is None


def test_detour_antitone(z2):
    p = z2.walk(z2.vertex((-1, -1)), (1, 1, 1, 1))
    vals = [cayley.min_detour(z2, p, p.vertices[2], r) for r in range(0, 4)]
    known = [v for v in vals if v is not None]
    assert known == sorted(known)
    # once NoDetour, it stays NoDetour
    first = next((i for i, v in enumerate(vals) if v is None), len(vals))
    assert all(v is None for v in vals[first:])


def test_transport_filling_identity_map(z2):
    comm = (-1, -2, 1, 2)
    d = Derivation(make_factor((1,), comm).expand(), (make_factor((1,), comm),))
    out = cayley.transport_filling(d, lambda lab: lab, z2, z2)
    assert verify_derivation(out)
    assert out.area == 1


def test_transport_filling_scaling():
    src = cayley.build_ball(oracles.FreeAbelianOracle(2), 4)
    dst = cayley.build_ball(oracles.FreeAbelianOracle(2), 8)
    double = lambda lab: tuple(2 * x for x in lab)
    comm = (-1, -2, 1, 2)
    d = Derivation(comm, (make_factor((), comm),))
    out = cayley.transport_filling(d, double, src, dst)
    assert verify_derivation(out)
    assert len(out.target) == 8


def test_ball_json(f2):
    import json

    d = json.loads(f2.to_json())
    assert d["radius"] == 4 and len(d["vertices"]) == len(f2)
