import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from conftest import HP_DPS, hp_domain, random_words, word_map
from fuchsian.codec import ball_words, load_group
from fuchsian.errors import ReductionError
from fuchsian.hyperbolic import IDENTITY, apply, hyp_distance
from fuchsian.takeuchi import LABELS, get_triple, group, parse_word, squared_generators
from fuchsian.tessellation import (
    FundamentalDomain, build_domain, conjugator_for, contains, depth, invert_signed, reduce, reduce_signed,
)


def covolume(e):
    # signature (1; e) has area 2 pi (1 - 1/e); the squared subgroup has index 4
    return 4 * 2 * math.pi * (2 * 1 - 2 + (1 - 1 / e))


@pytest.mark.parametrize("label", LABELS)
def test_domain_area_and_shape(label):
    _, dom = load_group(label)
    assert dom.compact
    assert dom.area == pytest.approx(covolume(get_triple(label).e), rel=1e-6)
    assert len(dom.walls) % 2 == 0 and len(dom.walls) >= 8
    # walls come in inverse pairs
    for w in dom.walls:
        assert any(v.pairing.same(w.pairing.inverse(), 1e-7) for v in dom.walls)
    # every wall supports an edge
    assert sorted(set(dom.edge_walls)) == list(range(len(dom.walls)))


def test_t2_wall_words():
    pres, dom = load_group("T2")
    ref = ["a^2", "b^2", "g", "a^-1 b a b^-1", "a b^-1 a^-1 b", "a^-1 b^-1 a b"]
    refm = [pres.evaluate(parse_word(w)) for w in ref]
    matched = []
    for w in dom.walls:
        hits = [k for k, m in enumerate(refm) if w.pairing.same(m, 1e-8) or w.pairing.same(m.inverse(), 1e-8)]
        assert len(hits) == 1
        matched.append(hits[0])
    assert len(dom.walls) == 12
    assert sorted(matched) == sorted(list(range(6)) * 2)


def test_cyclic_group_is_infinite():
    a2 = squared_generators(group("T1"))[0]
    dom = build_domain([a2])
    assert not dom.compact and dom.area == math.inf
    assert len(dom.walls) == 2


def test_signed_words():
    assert reduce_signed((1, 2, -2, 3)) == (1, 3)
    assert invert_signed((1, -4, 2)) == (-2, 4, -1)
    P = conjugator_for(2 + 3j)
    assert abs(apply(P, 2 + 3j) - 1j) < 1e-15


def _sample_interior(dom, rng, n):
    pts = []
    while len(pts) < n:
        w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(w) < 1 and contains(dom, w, model="disk", tol=-1e-6):
            pts.append(dom.from_working(w))
    return pts


@pytest.mark.parametrize("label", ["T1", "T2", "T7"])
def test_dirichlet_minimality_and_disjointness(label):
    _, dom = load_group(label)
    rng = random.Random(5)
    elems = [m for m, w in ball_words(dom, 200)[1:]]
    for z in _sample_interior(dom, rng, 40):
        d0 = hyp_distance(z, 1j)
        for g in elems:
            gz = apply(g, z)
            assert hyp_distance(gz, 1j) >= d0 - 1e-9
            assert not contains(dom, gz, tol=-1e-6)


def test_contains_examples():
    _, dom = load_group("T4")
    assert contains(dom, 1j)
    for w in dom.walls:
        assert not contains(dom, apply(w.pairing, 1j))
    assert contains(dom, 0j, model="disk")


@pytest.mark.parametrize("label", LABELS)
def test_reduce_covering_idempotent(label):
    _, dom = load_group(label)
    rng = random.Random(9)
    for _ in range(60):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 3))
        r = reduce(dom, z)
        assert contains(dom, r.point, tol=1e-8)
        assert abs(apply(r.map, z) - r.point) < 1e-8 * max(1, abs(r.point))
        again = reduce(dom, r.point)
        assert again.iterations == 0 and abs(again.point - r.point) < 1e-12
        assert r.operations == r.iterations * (len(dom.walls) + 1) + len(dom.walls)


def test_reduce_noisy_codewords():
    _, dom = load_group("T2")
    gens = squared_generators(group("T2"))
    rng = random.Random(2)
    for word in random_words(rng, 100, 3):
        g = word_map(gens, word)
        x = apply(g, 1j)
        # hyperbolic displacement of about 1e-3
        y = x + 1e-3 * x.imag * cmath.exp(2j * math.pi * rng.random())
        r = reduce(dom, y)
        assert r.map.same(g.inverse(), 1e-7)
        assert abs(r.point - 1j) < 1e-2


@pytest.mark.parametrize("label", LABELS)
def test_reduce_equivariant_hp(label):
    H, gens = hp_domain(label)
    rng = random.Random(8)
    with mpmath.workdps(HP_DPS):
        for word in random_words(rng, 20, 4):
            z = mpmath.mpc(rng.uniform(-2, 2), rng.uniform(0.05, 3))
            g = word_map(gens, word)
            a, b = reduce(H, z), reduce(H, apply(g, z))
            assert abs(a.point - b.point) < 1e-30
            assert b.map.same(a.map @ g.inverse(), 1e-25)


def test_hp_roundtrip_sample():
    H, gens = hp_domain("T6")
    rng = random.Random(4)
    with mpmath.workdps(HP_DPS):
        for word in random_words(rng, 50):
            g = word_map(gens, word)
            r = reduce(H, apply(g, mpmath.mpc(0, 1)))
            assert r.map.same(g.inverse(), 1e-20)
            assert abs(r.point - 1j) < 1e-20


def test_depth_and_iteration_cap():
    _, dom = load_group("T3")
    assert depth(dom, IDENTITY) == 0
    assert all(depth(dom, w.pairing) == 1 for w in dom.walls)
    far = apply(word_map(squared_generators(group("T3")), [1, 2, 3, 1, 2]), 1j)
    with pytest.raises(ReductionError):
        reduce(dom, far, max_iter=1)


def test_json_roundtrip():
    _, dom = load_group("T5")
    back = FundamentalDomain.from_json(dom.to_json())
    assert len(back.walls) == len(dom.walls) and back.area == dom.area
    for z in (0.3 + 0.2j, -1.1 + 0.05j, 2 + 4j):
        a, b = reduce(dom, z), reduce(back, z)
        assert a.map.same(b.map, 1e-9) and abs(a.point - b.point) < 1e-9
    np.testing.assert_allclose(back._rr, dom._rr, rtol=1e-15)
