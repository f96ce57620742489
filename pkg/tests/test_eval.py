"""Darkening model and segmentation metrics."""

import math

import numpy as np
import pytest

from logmorph import evaluate as ev
from logmorph import oracle
from logmorph.evaluate import DarkeningParams


class TestDarkeningField:
    def test_zero_at_center(self):
        field = ev.darkening_field(DarkeningParams(8.0, 8.0, 40.0), 17, 17)
        assert field[8, 8] == 0.0

    def test_quarter_radius_value(self):
        params = DarkeningParams(0.0, 0.0, 100.0, intensity=230.0)
        field = ev.darkening_field(params, 1, 26)
        assert field[0, 25] == pytest.approx(230.0 * (1 - math.exp(-1.0)),
                                             abs=1e-9)
        assert field[0, 25] == pytest.approx(145.3877, abs=1e-3)

    def test_full_radius_value(self):
        params = DarkeningParams(0.0, 0.0, 25.0, intensity=230.0)
        field = ev.darkening_field(params, 1, 26)
        assert field[0, 25] == pytest.approx(230.0 * (1 - math.exp(-4.0)),
                                             abs=1e-9)
        assert field[0, 25] == pytest.approx(225.7871, abs=1e-3)

    def test_radially_symmetric(self):
        params = DarkeningParams(10.0, 10.0, 30.0)
        field = ev.darkening_field(params, 21, 21)
        np.testing.assert_allclose(field, field[::-1, :], atol=1e-12)
        np.testing.assert_allclose(field, field[:, ::-1].T, atol=1e-12)

    def test_bad_params_rejected(self):
        with pytest.raises(ValueError):
            DarkeningParams(0, 0, -1.0)
        with pytest.raises(ValueError):
            ev.darkening_field(DarkeningParams(0, 0, 10.0, intensity=256.0),
                               4, 4)


class TestDarkenChannel:
    def test_no_darkening_is_identity(self):
        ch = np.arange(256, dtype=float)
        np.testing.assert_array_equal(ev.darken_channel(ch, 0.0), ch)

    def test_white_pixel_formula(self):
        # inverted value 0 lip-adds to exactly c, so output is 255 - floor(c)
        for c in (17.2, 99.9, 230.0):
            out = ev.darken_channel(np.array([[255.0]]), c)
            assert out[0, 0] == 255.0 - math.floor(c)

    def test_exhaustive_against_scalar_oracle(self):
        ch = np.arange(256, dtype=float)
        for c in (0.0, 25.5, 100.3, 199.99, 230.0 * (1 - math.exp(-1.0))):
            got = ev.darken_channel(ch, c)
            want = np.array([oracle.darken_value(v, c) for v in range(256)],
                            dtype=float)
            np.testing.assert_array_equal(got, want)

    def test_monotone_nonincreasing_in_darkening(self, rng):
        ch = rng.integers(0, 256, (12, 12)).astype(float)
        prev = ev.darken_channel(ch, 0.0)
        for c in (10.0, 60.0, 150.0, 230.0):
            cur = ev.darken_channel(ch, c)
            assert np.all(cur <= prev)
            prev = cur

    def test_output_range_integral(self, rng):
        ch = rng.integers(0, 256, (9, 9)).astype(float)
        field = ev.darkening_field(DarkeningParams(4, 4, 6.0), 9, 9)
        out = ev.darken_channel(ch, field)
        assert np.all((out >= 0) & (out <= 255))
        assert np.all(out == np.floor(out))

    def test_non_integer_input_rejected(self):
        with pytest.raises(ValueError):
            ev.darken_channel(np.array([1.5]), 10.0)

    def test_rgb_wrapper(self, rng):
        rgb = rng.integers(0, 256, (6, 6, 3)).astype(float)
        out = ev.darken_rgb(rgb, 50.0)
        for i in range(3):
            np.testing.assert_array_equal(out[..., i],
                                          ev.darken_channel(rgb[..., i], 50.0))


class TestConfusion:
    def test_perfect_mask(self, rng):
        gt = rng.random((10, 10)) < 0.3
        met = ev.confusion(gt, gt)
        assert met.accuracy == 1.0
        assert met.sensitivity == 1.0
        assert met.specificity == 1.0

    def test_all_negative_mask(self, rng):
        gt = rng.random((10, 10)) < 0.3
        met = ev.confusion(np.zeros((10, 10), bool), gt)
        assert met.sensitivity == 0.0
        assert met.specificity == 1.0

    def test_outside_zoi_ignored(self, rng):
        gt = rng.random((10, 10)) < 0.3
        mask = rng.random((10, 10)) < 0.3
        zoi = np.zeros((10, 10), bool)
        zoi[2:8, 2:8] = True
        met1 = ev.confusion(mask, gt, zoi)
        mask2, gt2 = mask.copy(), gt.copy()
        mask2[~zoi] = ~mask2[~zoi]
        gt2[~zoi] = ~gt2[~zoi]
        met2 = ev.confusion(mask2, gt2, zoi)
        assert (met1.tp, met1.fp, met1.tn, met1.fn) == \
            (met2.tp, met2.fp, met2.tn, met2.fn)

    def test_counts_sum_to_area(self, rng):
        gt = rng.random((10, 10)) < 0.5
        mask = rng.random((10, 10)) < 0.5
        met = ev.confusion(mask, gt)
        assert met.tp + met.fp + met.tn + met.fn == 100


class TestAuc:
    def test_matches_rank_oracle(self, rng):
        for i in range(60):
            n = int(rng.integers(20, 150))
            scores = (rng.integers(0, 6, n).astype(float) if i % 2
                      else rng.uniform(0, 1, n))
            labels = rng.random(n) < 0.4
            labels[0], labels[1] = True, False
            got = ev.auc_from_map(-scores[None, :], labels[None, :])
            assert got == pytest.approx(oracle.rank_auc(scores, labels),
                                        abs=1e-9)

    def test_invariant_under_monotone_transform(self, rng):
        vmap = rng.uniform(0, 100, (12, 12))
        gt = rng.random((12, 12)) < 0.3
        gt[0, 0], gt[0, 1] = True, False
        a1 = ev.auc_from_map(vmap, gt)
        a2 = ev.auc_from_map(np.exp(vmap / 25.0), gt)
        assert a1 == pytest.approx(a2, abs=1e-12)

    def test_zoi_restriction(self, rng):
        vmap = rng.uniform(0, 100, (12, 12))
        gt = rng.random((12, 12)) < 0.3
        zoi = np.zeros((12, 12), bool)
        zoi[3:9, 3:9] = True
        gt[4, 4], gt[5, 5] = True, False
        a1 = ev.auc_from_map(vmap, gt, zoi)
        vmap2 = vmap.copy()
        vmap2[~zoi] = -1e9
        assert ev.auc_from_map(vmap2, gt, zoi) == pytest.approx(a1, abs=1e-12)

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            ev.auc_from_map(np.zeros((2, 2)), np.ones((2, 2), bool))

    def test_perfect_separation(self):
        vmap = np.array([[0.0, 0.0, 10.0, 10.0]])   # vessels are valleys
        gt = np.array([[True, True, False, False]])
        assert ev.auc_from_map(vmap, gt) == 1.0


class TestRelativeDiff:
    def test_published_pair(self):
        rel = ev.relative_auc_diff(0.9425, 0.9197)
        assert rel == pytest.approx(0.0242, abs=2e-4)
        assert abs(100 * rel - 2.41) < 0.02

    def test_equal_aucs(self):
        assert ev.relative_auc_diff(0.9, 0.9) == 0.0

    def test_halved(self):
        assert ev.relative_auc_diff(1.0, 0.5) == 0.5


class TestZoiCircle:
    def test_recovers_disk(self):
        yy, xx = np.mgrid[0:41, 0:41]
        mask = np.hypot(yy - 20, xx - 23) <= 15
        params = ev.fit_zoi_circle(mask)
        assert params.center_x == pytest.approx(23, abs=0.5)
        assert params.center_y == pytest.approx(20, abs=0.5)
        assert params.radius == pytest.approx(15, abs=0.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ev.fit_zoi_circle(np.zeros((4, 4), bool))
