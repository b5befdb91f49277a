import math

import numpy as np
import pytest

from hdl.decoding import (
    BiasModel, argmax_decode, argmax_decode_shifted, bias_forward, compensate, soft_argmax_decode,
    support_expectation,
)
from hdl.errors import DegenerateBiasError
from hdl.heatmaps import GaussianSpec, Heatmap, Joint2D, gaussian_heatmap


def gauss(mean, sigma, rows=64, cols=48, **kwargs):
    return gaussian_heatmap(rows, cols, GaussianSpec(Joint2D(*mean), sigma), **kwargs)


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def random_quadrant_blob(rng, rows=64, cols=48):
    """
    A truncated Gaussian at an integer center whose support stays inside one quadrant.
    """
    sigma = float(rng.choice([0.5, 1.0, 2.0]))
    radius = int(math.ceil(3 * sigma))
    x = int(rng.integers(radius, rows // 2 - radius))
    y = int(rng.integers(radius, cols // 2 - radius))
    if rng.random() < 0.5:
        x = rows - 1 - x
    if rng.random() < 0.5:
        y = cols - 1 - y
    return gauss((x, y), sigma, rows, cols, truncate=radius), Joint2D(float(x), float(y))


def test_argmax():
    h = Heatmap([[0, 1, 5], [2, 3, 4], [0, 0, 0]])
    assert argmax_decode(h) == (0, 2)
    assert argmax_decode(Heatmap(np.ones((4, 4)))) == (0, 0)
    assert argmax_decode(gauss((32, 24), 2)) == (32, 24)

def test_shifted_argmax_ties():
    assert argmax_decode_shifted(gauss((20, 15), 2)) == (20, 15)

def test_shifted_argmax_toward_neighbor():
    v = np.zeros((10, 10))
    v[5, 5] = 1.0
    v[5, 6] = 0.9
    assert argmax_decode_shifted(Heatmap(v)) == (5.0, 5.25)
    assert argmax_decode_shifted(Heatmap(v), shift=0.1) == pytest.approx((5.0, 5.1))

def test_shifted_argmax_off_grid_mean():
    mean = (10.4, 8.0)
    h = gauss(mean, 2)
    plain, shifted = argmax_decode(h), argmax_decode_shifted(h)
    assert shifted == (10.25, 8.0)
    assert dist(shifted, mean) < dist(plain, mean)

def test_shifted_argmax_border():
    v = np.zeros((5, 5))
    v[0, 2] = 1.0
    v[1, 2] = 0.9
    v[0, 3] = 0.5
    # no neighbor above row 0, so that axis stays put
    assert argmax_decode_shifted(Heatmap(v)) == (0.0, 2.25)
    with pytest.raises(ValueError):
        argmax_decode_shifted(Heatmap(v), shift=0.5)

def test_soft_argmax_symmetry():
    j, bm = soft_argmax_decode(Heatmap(np.zeros((7, 10))), 3)
    assert j.x == pytest.approx(3.0) and j.y == pytest.approx(4.5)
    assert (bm.rows, bm.cols, bm.beta) == (7, 10, 3)
    j, _ = soft_argmax_decode(gauss((20, 15), 2, 41, 31), 10)
    assert j.x == pytest.approx(20, abs=1e-9) and j.y == pytest.approx(15, abs=1e-9)

def test_soft_argmax_pulled_to_center():
    j10, _ = soft_argmax_decode(gauss((10, 8), 1), 10)
    j1, _ = soft_argmax_decode(gauss((10, 8), 1), 1)
    assert j10.x > 10 and j10.y > 8
    assert dist(j1, (10, 8)) > dist(j10, (10, 8))

def test_bias_model_partition():
    h = gauss((32, 24), 2)
    _, bm = soft_argmax_decode(h, 10)
    c = np.exp(10 * h.values).sum()
    assert bm.c == pytest.approx(c, rel=1e-12)
    assert bm.ratio == pytest.approx(64 * 48 / c, rel=1e-12)
    assert BiasModel.from_partition(5000.0, 64, 48).ratio == pytest.approx(3072 / 5000)

def test_compensate_fixed_points():
    bm = BiasModel.from_partition(10000.0, 64, 48)
    assert compensate(Joint2D(31.5, 23.5), bm) == pytest.approx((31.5, 23.5), abs=1e-12)
    assert compensate(Joint2D(32.0, 24.0), bm, convention="continuous") == pytest.approx((32.0, 24.0), abs=1e-12)
    with pytest.raises(ValueError):
        compensate(Joint2D(0, 0), bm, convention="sideways")

def test_compensate_continuous_closed_form():
    h, w, c = 64, 48, 9000.0
    bm = BiasModel.from_partition(c, h, w)
    x_r, y_r = 12.3, 40.1
    x_o = c / (c - h * w) * x_r - h * h * w / (2 * (c - h * w))
    y_o = c / (c - h * w) * y_r - h * w * w / (2 * (c - h * w))
    assert compensate(Joint2D(x_r, y_r), bm, convention="continuous") == pytest.approx((x_o, y_o), abs=1e-10)

def test_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(200):
        rows, cols = int(rng.integers(2, 80)), int(rng.integers(2, 80))
        c = rows * cols * float(np.exp(rng.uniform(0.01, 14)))
        bm = BiasModel.from_partition(c, rows, cols)
        j_o = Joint2D(rng.uniform(-5, rows + 5), rng.uniform(-5, cols + 5))
        for convention in ("index", "continuous"):
            back = compensate(bias_forward(j_o, bm, convention), bm, convention)
            assert back.x == pytest.approx(j_o.x, abs=1e-10) and back.y == pytest.approx(j_o.y, abs=1e-10)

def test_compensate_moves_away_from_center():
    rng = np.random.default_rng(1)
    bm = BiasModel.from_partition(4000.0, 64, 48)
    center = bm.grid_center()
    scale = 4000.0 / (4000.0 - 3072)
    for _ in range(100):
        j = Joint2D(rng.uniform(0, 63), rng.uniform(0, 47))
        out = compensate(j, bm)
        assert dist(out, center) > dist(j, center)
        assert out.x - center.x == pytest.approx(scale * (j.x - center.x))
        assert out.y - center.y == pytest.approx(scale * (j.y - center.y))

def test_degenerate_bias():
    for c in (3072.0, 1000.0):
        with pytest.raises(DegenerateBiasError):
            compensate(Joint2D(1, 1), BiasModel.from_partition(c, 64, 48))
    for fill in (0.0, -1.0):
        j, bm = soft_argmax_decode(Heatmap(np.full((8, 6), fill)), 5)
        with pytest.raises(DegenerateBiasError):
            compensate(j, bm)

def test_blob_recovery():
    h = gauss((10, 8), 1, truncate=3)
    assert support_expectation(h, 10) == pytest.approx((10, 8), abs=1e-12)
    j_re, bm = soft_argmax_decode(h, 10)
    j_ro = compensate(j_re, bm)
    assert dist(j_ro, (10, 8)) < 0.05
    assert dist(j_re, (10, 8)) > dist(j_ro, (10, 8))
    # the discrete bias model is exact for a zero background
    assert bias_forward(Joint2D(10.0, 8.0), bm) == pytest.approx(tuple(j_re), abs=1e-9)

def test_blob_recovery_needs_index_center():
    h = gauss((10, 8), 1, truncate=3)
    j_re, bm = soft_argmax_decode(h, 10)
    index = compensate(j_re, bm)
    continuous = compensate(j_re, bm, convention="continuous")
    assert dist(index, (10, 8)) < dist(continuous, (10, 8))

def test_large_beta_compensation_vanishes():
    h = gauss((10, 8), 2)
    j_re, bm = soft_argmax_decode(h, 10000)
    assert dist(compensate(j_re, bm), j_re) < 1e-6

def test_compensation_beats_raw_on_random_blobs():
    rng = np.random.default_rng(2)
    raw_means = { }
    for beta in (1, 5, 10, 20):
        raw_errors = [ ]
        for _ in range(200):
            h, center = random_quadrant_blob(rng)
            oracle = support_expectation(h, beta)
            assert oracle == pytest.approx(tuple(center), abs=1e-9)
            j_re, bm = soft_argmax_decode(h, beta)
            j_ro = compensate(j_re, bm)
            raw, comp = dist(j_re, oracle), dist(j_ro, oracle)
            assert comp <= raw
            assert raw > comp
            if beta == 10:
                assert comp < 0.05
            raw_errors.append(raw)
        raw_means[beta] = np.mean(raw_errors)
    assert raw_means[1] > raw_means[10] > raw_means[20]

def test_soft_argmax_approaches_argmax():
    rng = np.random.default_rng(3)
    for _ in range(100):
        shape = (int(rng.integers(2, 65)), int(rng.integers(2, 49)))
        v = rng.random(shape) * 0.9
        peak = tuple(int(rng.integers(0, n)) for n in shape)
        v[peak] = 1.0
        h = Heatmap(v)
        j_re, bm = soft_argmax_decode(h, 1000)
        assert dist(j_re, argmax_decode(h)) < 0.01
        assert math.isfinite(bm.log_c)
        assert 0 <= bm.ratio < 1e-40


if __name__ == "__main__":
    test_blob_recovery()
    test_round_trip()
    test_compensation_beats_raw_on_random_blobs()
    test_soft_argmax_approaches_argmax()
