import json
import math

import numpy as np
import pytest

from fuchsian.codec import (
    PRESETS, ball_census, build_codebook, census_csv, decode, encode, expand_squared, metrics,
    nearest, nested_codebook,
)
from fuchsian.errors import CodebookError
from fuchsian.takeuchi import LABELS, group, parse_word

ALL = [(p, L) for p in PRESETS for L in LABELS]


@pytest.mark.parametrize("preset,label", ALL)
def test_preset_roundtrip_noiseless(preset, label):
    cb = build_codebook(label, preset)
    assert len(cb) == 2 * len(PRESETS[preset][label]) == (4 if preset == "four_nuf" else 16)
    for m in range(len(cb)):
        r = decode(cb, encode(cb, m))
        assert r.status == "ok" and r.message == m
        assert nearest(cb, encode(cb, m)) == m
    assert all(e.codeword.imag > 0 for e in cb.entries[: cb.N])
    assert np.allclose(cb.points[cb.N:], -cb.points[: cb.N])


def test_known_codewords():
    t5 = build_codebook("T5", "four_nuf")
    assert t5.entries[0].codeword == 1j
    t1 = build_codebook("T1", "four_nuf")
    lam = (math.sqrt(5) - 1) / 2  # alpha = diag(lam, 1/lam) with lam + 1/lam = sqrt 5
    assert t1.entries[0].codeword == pytest.approx(lam ** 4 * 1j, abs=1e-14)
    assert abs(t1.entries[0].codeword - 0.1458980j) < 1e-7
    t2 = build_codebook("T2", "four_nuf")
    assert sum(p.imag > 0 for p in t2.points) == 2 and sum(p.imag < 0 for p in t2.points) == 2


def test_codebook_errors():
    with pytest.raises(CodebookError):
        build_codebook("T1", ["a^2", "a^2"])
    with pytest.raises(CodebookError):
        build_codebook("T1", "four_nuf", tau=5j)
    with pytest.raises(CodebookError):
        build_codebook("T1", "bogus")
    cb = build_codebook("T1")
    with pytest.raises(IndexError):
        encode(cb, 4)


def test_decode_statuses():
    cb = build_codebook("T3")
    assert decode(cb, 0.5 + 0j).status == "boundary"
    r = decode(cb, 0.5 + 0j, ml_fallback=True)
    assert r.via_ml and r.message == nearest(cb, 0.5 + 0j)
    # a point in a tile not in the codebook is an erasure
    far = group("T3").evaluate(parse_word("b^2 b^2 a^2"))(1j)
    r = decode(cb, far)
    assert r.status == "erasure" and r.message is None and r.iterations > 0
    assert decode(cb, far, ml_fallback=True).via_ml


def test_expand_squared():
    assert expand_squared((1,)) == parse_word("a^2")
    assert expand_squared((-6,)) == parse_word("a b g^-1 b^-1 a^-1")
    assert expand_squared((1, -1)) == ()


def test_metrics_and_json():
    cb = build_codebook("T2", "sixteen_nuf")
    m = metrics(cb)
    d = np.abs(cb.points[:, None] - cb.points[None, :])
    d[np.diag_indices_from(d)] = np.inf
    assert m.min_distance == pytest.approx(d.min(), rel=1e-12)
    assert m.avg_energy == pytest.approx(np.mean(np.abs(cb.points) ** 2), rel=1e-12)
    assert m.code_depth >= 1
    obj = json.loads(cb.to_json())
    assert len(obj["entries"]) == 16 and obj["entries"][8]["word"].startswith("-")
    assert metrics(build_codebook("T5")).code_depth == 1


@pytest.mark.parametrize("n", [4, 16, 64])
def test_nested_codebooks(n):
    cb = nested_codebook("T4", n)
    assert cb.N == n and cb.entries[0].codeword == pytest.approx(1j)
    for m in range(0, 2 * n, 3):
        assert decode(cb, encode(cb, m)).message == m


@pytest.mark.parametrize("label", ["T1", "T2"])
@pytest.mark.parametrize("budget", [100, 1000])
def test_census_invariants(label, budget):
    rep = ball_census(label, budget)
    c1, c05 = rep.counts[1.0], rep.counts[0.5]
    assert c1 % 2 == 0 and c05 % 2 == 0 and c05 <= c1
    assert rep.maps == budget
    assert rep.min_distance > 0


def test_census_modes_and_csv():
    rep = ball_census("T1", 42, inverses=False)
    assert rep.mode == "positive_products"
    assert 1e-5 <= rep.min_distance <= 1e-3
    text = census_csv([rep], "# h")
    assert text.splitlines()[1] == "group,budget,mode,maps,radius,count,min_distance"
    with pytest.raises(ValueError):
        ball_census("T1", 3)
    with pytest.raises(ValueError):
        ball_census("T1", 10, radii=(0,))
