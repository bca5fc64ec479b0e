import math

import numpy as np
import pytest

from braidfib.braidwords import BraidWord, permutation_of
from braidfib.strands import (CollisionError, StrandSystem, builtin_52,
                              parametrize, recover_word)
from braidfib.trigcurves import TrigCurve
from helpers import cyclically_equal, random_artin_word


def direct_52(j, t):
    th = (t + 2 * math.pi * j) / 3
    return (-math.cos(2 * th) - 0.75 * math.cos(5 * th)
            - 1j * (math.sin(4 * th) + 0.5 * math.sin(th)))


def test_builtin_52_matches_formula():
    s = builtin_52()
    assert s.n == 3
    rng = np.random.default_rng(0)
    for t in rng.uniform(0, 2 * np.pi, 25):
        for j in (1, 2, 3):
            assert abs(s.curves[j - 1](float(t)) - direct_52(j, float(t))) < 1e-13
    assert s.closure.images == (2, 3, 1)


def test_builtin_52_separation_positive():
    # dense sampling: the minimum pairwise distance is macroscopic
    s = builtin_52()
    ts = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    pts = s.sample(ts)
    dmin = min(np.min(np.abs(pts[:, a] - pts[:, b]))
               for a in range(3) for b in range(a + 1, 3))
    assert dmin > 0.3


def test_recover_52_word():
    w = recover_word(builtin_52())
    assert w.as_ints() == [1, 2, 2, 2, 1, -2]
    assert w.exponent_sum() == 4
    assert permutation_of(w).images == (2, 3, 1)


def test_recover_constant_strands_empty_word():
    s = StrandSystem([TrigCurve.constant(0.0), TrigCurve.constant(1.0)])
    assert recover_word(s).letters == ()


def test_recover_half_twist_single_letter():
    c1 = TrigCurve([1], [0.5], q=2)
    c2 = TrigCurve([1], [-0.5], q=2)
    w = recover_word(StrandSystem([c1, c2]))
    assert len(w) == 1 and abs(w.as_ints()[0]) == 1


def test_collision_rejected():
    # strands that actually touch at t = pi
    c1 = TrigCurve([0, 1], [0.5, 0.5])   # 0.5 + 0.5 e^{it}: hits 0 at t=pi
    c2 = TrigCurve.constant(0.0)
    with pytest.raises(CollisionError):
        StrandSystem([c1, c2])


def test_parametrize_empty_and_single():
    s = parametrize(BraidWord(3, ()))
    assert recover_word(s).letters == ()
    s1 = parametrize(BraidWord.from_ints(2, [1]))
    got = recover_word(s1)
    assert got.as_ints() == [1]


def test_parametrize_roundtrip_randomized():
    # permutation and exponent sum survive the Fourier smoothing
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        w = random_artin_word(rng, n, 12)
        s = parametrize(w)
        got = recover_word(s, grid_size=max(512, 64 * len(w)))
        assert permutation_of(got).images == permutation_of(w).images
        assert got.exponent_sum() == w.exponent_sum()


def test_recover_invariant_under_time_rotation():
    w = BraidWord.from_ints(3, [1, -2, 1])
    s = parametrize(w)
    base = recover_word(s)
    rolled = StrandSystem([c.shifted(1.1) for c in s.curves], validate=False)
    got = recover_word(rolled)
    assert cyclically_equal(got, base)


def test_from_samples_orbit_fit():
    s = builtin_52()
    ts = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    fitted = StrandSystem.from_samples(s.sample(ts))
    assert fitted.closure.images == (2, 3, 1)
    probe = np.linspace(0, 2 * np.pi, 41)
    assert np.max(np.abs(fitted.sample(probe) - s.sample(probe))) < 1e-12
    assert recover_word(fitted).as_ints() == [1, 2, 2, 2, 1, -2]


def test_from_samples_of_tracked_braid():
    from braidfib.polyloops import from_roots, track

    sb = track(from_roots(builtin_52()), "roots", N=256)
    fitted = StrandSystem.from_samples(sb.points[:-1], closure=sb.closure)
    assert recover_word(fitted).as_ints() == [1, 2, 2, 2, 1, -2]


def test_json_and_csv_roundtrip(tmp_path):
    s = builtin_52()
    path = tmp_path / "s.json"
    s.save(path)
    back = StrandSystem.load(path)
    ts = np.linspace(0, 2 * np.pi, 50)
    assert np.allclose(back.sample(ts), s.sample(ts))
    csv = tmp_path / "s.csv"
    s.sample_csv(csv, samples=16)
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,re_1,im_1,re_2,im_2,re_3,im_3"
    assert len(lines) == 17
