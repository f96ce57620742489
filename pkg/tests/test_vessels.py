"""Probe rasterization and the segmentation pipeline."""

import numpy as np
import pytest
from conftest import dice, max_abs_diff

from logmorph import fixtures, lip, morphology, oracle, vessels
from logmorph.vessels import PipelineConfig, build_probe


class TestProbe:
    def test_horizontal_probe_rows(self):
        p = build_probe(0.0, 8, 7)
        assert set(p.center.offsets[:, 0]) == {0}
        assert set(p.left.offsets[:, 0]) == {4}
        assert set(p.right.offsets[:, 0]) == {-4}
        for seg in (p.center, p.left, p.right):
            assert sorted(seg.offsets[:, 1]) == list(range(7))

    def test_quarter_turn_transposes_support(self):
        p0 = build_probe(0.0, 6, 7)
        p90 = build_probe(np.pi / 2.0, 6, 7)
        assert {(dx, dy) for dy, dx in p0.center.offset_set()} \
            == p90.center.offset_set()

    def test_equal_cardinality_across_orientations(self):
        for i in range(18):
            p = build_probe(2 * np.pi * i / 18, 6, 9)
            assert (p.center.size, p.left.size, p.right.size) == (9, 9, 9)

    def test_segment_intensities(self):
        p = build_probe(0.3, 6, 7, center_intensity=12.0, side_intensity=2.0)
        assert np.all(p.center.values == 12.0)
        assert np.all(p.left.values == 2.0) and np.all(p.right.values == 2.0)

    def test_degenerate_geometry_rejected(self):
        with pytest.raises(ValueError):
            build_probe(0.0, 6, 1)
        with pytest.raises(ValueError):
            build_probe(0.0, 1, 7)
        with pytest.raises(ValueError):
            build_probe(0.0, 6, 7, center_intensity=0.0, side_intensity=0.0)


class TestContactFloor:
    def test_matches_definition(self, rng):
        f = rng.uniform(0, 255, (12, 12))
        p = build_probe(0.5, 4, 5)
        want = np.minimum(
            oracle.naive_log_erode(f, p.center),
            np.minimum(oracle.naive_log_rank_min(f, p.left, 1),
                       oracle.naive_log_rank_min(f, p.right, 1)))
        assert max_abs_diff(vessels.contact_floor(f, p, 1), want) <= 1e-9

    def test_rank_zero_is_erosion_infimum(self, rng):
        f = rng.uniform(0, 255, (12, 12))
        p = build_probe(1.1, 4, 5)
        want = np.minimum(
            morphology.log_erode(f, p.center),
            np.minimum(morphology.log_erode(f, p.left),
                       morphology.log_erode(f, p.right)))
        np.testing.assert_array_equal(vessels.contact_floor(f, p, 0), want)

    def test_constant_image(self):
        f = np.full((16, 16), 150.0)
        p = build_probe(0.0, 4, 5, center_intensity=10.0)
        floor = vessels.contact_floor(f, p, 0)
        np.testing.assert_allclose(floor, lip.lip_sub(150.0, 10.0), atol=1e-12)


class TestResponses:
    def test_nonnegative(self, rng):
        f = rng.uniform(0, 255, (16, 16))
        p = build_probe(0.7, 5, 6)
        left, right = vessels.side_responses(f, p, 1)
        assert np.all(left >= -1e-12) and np.all(right >= -1e-12)

    def test_aligned_ridge_quiet_perpendicular_loud(self):
        f, _, _ = fixtures.fundus_phantom(angles=(0.0,), size=48)
        center = (24, 24)
        aligned = vessels.orientation_response(f, build_probe(0.0, 6, 7), 1)
        crossed = vessels.orientation_response(f, build_probe(np.pi / 2, 6, 7), 1)
        assert aligned[center] <= 1e-9
        assert crossed[center] > 3.0

    def test_lip_shift_invariance(self, rng):
        f = rng.uniform(0, 255, (24, 24))
        p = build_probe(0.35, 5, 6)
        base_l, base_r = vessels.side_responses(f, p, 1)
        for c in (-200.0, 120.0):
            lft, rgt = vessels.side_responses(lip.lip_add(f, c), p, 1)
            assert max_abs_diff(lft, base_l) <= 1e-6
            assert max_abs_diff(rgt, base_r) <= 1e-6


class TestVesselness:
    def test_single_probe_single_orientation_degenerates(self, rng):
        f = rng.uniform(0, 255, (20, 20))
        cfg = PipelineConfig(probes=((6, 7),), orientations=1, k=1)
        want = vessels.orientation_response(f, build_probe(0.0, 6, 7), 1)
        np.testing.assert_array_equal(vessels.vesselness(f, cfg), want)

    def test_constant_image_gives_constant_map(self):
        f = np.full((32, 32), 130.0)
        cfg = PipelineConfig(probes=((4, 5),), orientations=6, k=0)
        vmap = vessels.vesselness(f, cfg)
        np.testing.assert_allclose(vmap, vmap[16, 16], atol=1e-9)

    def test_full_chain_invariance(self):
        f, _, _ = fixtures.fundus_phantom()
        cfg = PipelineConfig(probes=((6, 7),), orientations=6, k=1)
        base = vessels.vesselness(f, cfg)
        for c in (-200.0, 200.0):
            assert max_abs_diff(vessels.vesselness(lip.lip_add(f, c), cfg),
                                base) <= 1e-6

    def test_empty_config_rejected(self):
        with pytest.raises(ValueError):
            PipelineConfig(probes=())
        with pytest.raises(ValueError):
            PipelineConfig(orientations=0)


class TestSegmentation:
    def test_fraction_bounds(self, rng):
        vmap = rng.uniform(0, 100, (20, 20))
        zoi = np.hypot(*np.mgrid[-10:10, -10:10]) <= 8
        assert vessels.segment_vessels(vmap, zoi, 0.0).sum() == 0
        np.testing.assert_array_equal(vessels.segment_vessels(vmap, zoi, 1.0),
                                      zoi)

    def test_exact_pixel_count(self, rng):
        vmap = rng.uniform(0, 100, (20, 20))
        zoi = np.ones((20, 20), bool)
        mask = vessels.segment_vessels(vmap, zoi, 0.12)
        assert mask.sum() == round(0.12 * 400)

    def test_threshold_monotone(self, rng):
        vmap = rng.uniform(0, 100, (20, 20))
        zoi = np.ones((20, 20), bool)
        small = vessels.segment_vessels(vmap, zoi, 0.10)
        large = vessels.segment_vessels(vmap, zoi, 0.12)
        assert np.all(large[small])

    def test_ties_resolved_in_scan_order(self):
        vmap = np.zeros((2, 4))
        zoi = np.ones((2, 4), bool)
        mask = vessels.segment_vessels(vmap, zoi, 0.5)
        np.testing.assert_array_equal(
            mask, [[True, True, True, True], [False, False, False, False]])

    def test_orientation_coverage(self):
        # one orientation step of rotation barely moves segmentation quality
        step = 2 * np.pi / 18
        cfg = PipelineConfig(probes=((6, 7),), orientations=18, k=1)
        f0, gt0, zoi = fixtures.fundus_phantom()
        f1, gt1, _ = fixtures.fundus_phantom(angle_offset=step)
        m0 = vessels.segment_vessels(vessels.vesselness(f0, cfg), zoi, 0.12)
        m1 = vessels.segment_vessels(vessels.vesselness(f1, cfg), zoi, 0.12)
        assert abs(dice(m0, gt0) - dice(m1, gt1)) < 0.1

    def test_phantom_segmentation_quality(self):
        cfg = PipelineConfig(probes=((6, 7),), orientations=18, k=1)
        f, gt, zoi = fixtures.fundus_phantom()
        mask = vessels.segment_vessels(vessels.vesselness(f, cfg), zoi, 0.12)
        assert dice(mask, gt) > 0.6


class TestSegmentFundus:
    def test_grey_input_inverted_by_default(self):
        f_lip, gt, zoi = fixtures.fundus_phantom()
        cfg = PipelineConfig(probes=((6, 7),), orientations=12, k=1)
        conventional = 255.0 - f_lip
        mask_a, _, _ = vessels.segment_fundus(conventional, cfg, zoi=zoi)
        mask_b, _, _ = vessels.segment_fundus(f_lip, cfg, zoi=zoi,
                                              lip_input=True)
        np.testing.assert_array_equal(mask_a, mask_b)
        assert dice(mask_a, gt) > 0.6

    def test_colour_input_uses_luminance(self):
        rgb, gt, zoi = fixtures.fundus_phantom_rgb()
        cfg = PipelineConfig(probes=((6, 7),), orientations=12, k=1)
        mask, vmap, zoi_out = vessels.segment_fundus(rgb.astype(float), cfg,
                                                     zoi=zoi)
        assert vmap.shape == rgb.shape[:2]
        assert dice(mask, gt) > 0.5


class TestZoi:
    def test_full_frame(self):
        img = np.full((32, 32), 200.0)
        np.testing.assert_array_equal(vessels.estimate_zoi(img),
                                      np.ones((32, 32), bool))

    def test_phantom_centre_disk(self):
        rgb, _, zoi = fixtures.fundus_phantom_rgb()
        est = vessels.estimate_zoi(rgb)
        assert dice(est, zoi) > 0.95

    def test_dark_image_rejected(self):
        with pytest.raises(ValueError):
            vessels.estimate_zoi(np.zeros((16, 16)))


class TestConfigFile:
    def test_roundtrip(self, tmp_path):
        cfg = PipelineConfig(probes=((5, 9), (7, 11)), orientations=12, k=2,
                             threshold_fraction=0.1, center_intensity=8.0)
        path = tmp_path / "pipeline.cfg"
        cfg.save(path)
        again = PipelineConfig.from_file(path)
        assert again == cfg

    def test_defaults(self):
        cfg = PipelineConfig()
        assert cfg.probes == ((9, 9), (13, 13), (17, 17))
        assert cfg.orientations == 18
        assert cfg.threshold_fraction == 0.12

    def test_commented_config_file(self, tmp_path):
        path = tmp_path / "pipe.cfg"
        path.write_text(
            "[pipeline]\n"
            "probes = 5x9, 7x11   ; width x length per scale\n"
            "orientations = 12    # evenly spaced\n"
            "k = auto\n"
            "threshold_fraction = 0.1\n")
        cfg = PipelineConfig.from_file(path)
        assert cfg.probes == ((5, 9), (7, 11))
        assert cfg.orientations == 12
        assert cfg.k is None
        assert cfg.threshold_fraction == 0.1

    def test_auto_rank_rule(self):
        cfg = PipelineConfig(k=None)
        assert cfg.rank_for(9) == 0       # round(0.45)
        assert cfg.rank_for(11) == 1      # round(0.55)
        assert cfg.rank_for(30) == 2      # round(1.5) away from zero
