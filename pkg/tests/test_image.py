"""Structuring functions, generators and image-level negation."""

import numpy as np
import pytest

from logmorph import image as im
from logmorph import lip


class TestStructuringFunction:
    def test_duplicate_offsets_rejected(self):
        with pytest.raises(ValueError):
            im.StructuringFunction(np.array([[0, 0], [0, 0]]),
                                   np.array([1.0, 2.0]))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            im.StructuringFunction(np.zeros((0, 2), int), np.zeros(0))

    def test_infinite_value_rejected(self):
        with pytest.raises(ValueError):
            im.StructuringFunction(np.array([[0, 0]]), np.array([-np.inf]))

    def test_reflect_single_offset(self):
        b = im.StructuringFunction(np.array([[0, 1]]), np.array([5.0]))
        r = b.reflect()
        assert r.offsets.tolist() == [[0, -1]]
        assert r.values.tolist() == [5.0]

    def test_reflect_involution(self, rng):
        from conftest import random_sf
        b = random_sf(rng)
        rr = b.reflect().reflect()
        assert np.array_equal(rr.offsets, b.offsets)
        assert np.array_equal(rr.values, b.values)

    def test_reflect_fixes_symmetric_disk(self):
        b = im.disk(2, value=7.0)
        assert b.reflect().offset_set() == b.offset_set()

    def test_lip_negated_values(self, rng):
        from conftest import random_sf
        b = random_sf(rng, lo=1.0, hi=120.0)
        nb = b.lip_negated()
        assert np.array_equal(nb.offsets, b.offsets)
        np.testing.assert_allclose(nb.values, lip.lip_negate(b.values))
        again = nb.lip_negated()
        np.testing.assert_allclose(again.values, b.values, atol=1e-9)

    def test_reflect_commutes_with_negation(self, rng):
        from conftest import random_sf
        b = random_sf(rng, lo=1.0, hi=100.0)
        a = b.reflect().lip_negated()
        c = b.lip_negated().reflect()
        assert a.offset_set() == c.offset_set()
        order_a = np.lexsort(a.offsets.T)
        order_c = np.lexsort(c.offsets.T)
        np.testing.assert_allclose(a.values[order_a], c.values[order_c])

    def test_is_flat(self):
        assert im.disk(1).is_flat
        assert not im.disk(1, value=3.0).is_flat

    def test_immutability(self):
        b = im.disk(1)
        with pytest.raises(ValueError):
            b.values[0] = 5.0


class TestGenerators:
    def test_disk_radius_one_is_cross(self):
        assert im.disk(1).offset_set() == {(0, 0), (1, 0), (-1, 0),
                                           (0, 1), (0, -1)}

    def test_disk_requires_radius(self):
        with pytest.raises(ValueError):
            im.disk(0)

    def test_supports_stay_in_bounding_box(self):
        for sf, r in ((im.disk(4), 4), (im.half_sphere(5), 5),
                      (im.ring(2, 6), 6),
                      (im.gaussian_ring(3, 5, 10.0, 1.5, 40.0), 5)):
            y0, x0, y1, x1 = sf.bounding_box()
            assert min(y0, x0) >= -r and max(y1, x1) <= r

    def test_half_sphere_center_value(self):
        b = im.half_sphere(16, base=127.0)
        center = b.values[np.all(b.offsets == 0, axis=1)]
        assert center[0] == pytest.approx(127.0 + 16.0)
        b2 = im.half_sphere(16, base=127.0, amplitude=48.0)
        center2 = b2.values[np.all(b2.offsets == 0, axis=1)]
        assert center2[0] == pytest.approx(127.0 + 48.0)

    def test_degenerate_ring_rejected(self):
        with pytest.raises(ValueError):
            im.ring(3, 3)

    def test_gaussian_ring_regions(self):
        b = im.gaussian_ring(3, 5, ring_value=12.0, sigma=1.0, amplitude=50.0)
        d2 = np.sum(b.offsets.astype(float) ** 2, axis=1)
        rim = d2 >= 9
        assert np.all(b.values[rim] == 12.0)
        center = b.values[d2 == 0]
        assert center[0] == pytest.approx(50.0)

    def test_segment_cardinality_over_orientations(self):
        sizes = {im.line_segment(9, 2 * np.pi * i / 18).size for i in range(18)}
        assert sizes == {9}

    def test_segment_quarter_turn_transposes(self):
        s0 = im.line_segment(7, 0.0)
        s90 = im.line_segment(7, np.pi / 2.0)
        assert {(dx, dy) for dy, dx in s0.offset_set()} == s90.offset_set()

    def test_from_array_holes(self):
        arr = np.array([[1.0, -np.inf, 3.0]])
        b = im.from_array(arr, origin=(0, 0))
        assert b.offset_set() == {(0, 0), (0, 2)}
        assert sorted(b.values.tolist()) == [1.0, 3.0]


class TestNegateImage:
    def test_zero_fixed_point(self):
        f = np.zeros((4, 4))
        np.testing.assert_array_equal(im.negate_image(f), f)

    def test_constant_midgrey(self):
        f = np.full((3, 3), 128.0)
        np.testing.assert_allclose(im.negate_image(f), -256.0)

    def test_involution(self, rng):
        f = rng.uniform(-400, 255.9, (8, 8))
        np.testing.assert_allclose(im.negate_image(im.negate_image(f)), f,
                                   atol=1e-9)

    def test_sentinels_swap(self):
        f = np.array([[256.0, -np.inf]])
        out = im.negate_image(f)
        assert out[0, 0] == -np.inf and out[0, 1] == 256.0

    def test_matches_scalar_law_on_finite(self, rng):
        f = rng.uniform(-100, 255, (5, 5))
        np.testing.assert_allclose(im.negate_image(f), lip.lip_negate(f))
