"""Procedural synthetic fixtures: bump signals, spirals, fundus phantoms.

Everything is deterministic given its parameters and seed; the test suite
freezes both.
"""

import math

import numpy as np

from .lip import lip_add

__all__ = [
    "bump_signal",
    "add_impulse_noise",
    "plane_field",
    "spiral_image",
    "fundus_phantom",
    "fundus_phantom_rgb",
]


def bump_signal(length=192, m=256.0, background=30.0, amplitude=70.0,
                sigma=4.0, shift=80.0):
    """1-row image with two identical bumps, the second half LIP-shifted.

    Returns (signal, (c1, c2), split): the windows around the two bump
    centres are related exactly by the LIP-addition of ``shift``, and the
    split between the halves is a plain step transition.
    """
    x = np.arange(length, dtype=np.float64)
    c1, c2 = length // 4, 3 * length // 4
    split = length // 2
    relief = amplitude * (np.exp(-((x - c1) ** 2) / (2 * sigma * sigma))
                          + np.exp(-((x - c2) ** 2) / (2 * sigma * sigma)))
    base = background + relief
    f = np.where(x < split, base, lip_add(base, shift, m))
    return f[None, :], (c1, c2), split


def add_impulse_noise(f, count, amplitude, seed, m=256.0):
    """Seeded salt-and-pepper style spikes, clipped to [0, m-1]."""
    rng = np.random.default_rng(seed)
    out = np.array(f, dtype=np.float64)
    flat = out.ravel()
    idx = rng.choice(flat.size, size=count, replace=False)
    signs = rng.choice([-1.0, 1.0], size=count)
    flat[idx] = np.clip(flat[idx] + signs * amplitude, 0.0, m - 1.0)
    return out


def plane_field(height, width, max_value=60.0):
    """Linear lighting drift rising from 0 to ``max_value`` across the frame."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    return max_value * (yy + xx) / (height + width - 2.0)


def _stamp_curve(canvas, points, half_width, level):
    h, w = canvas.shape
    r = int(math.ceil(half_width))
    for py, px in points:
        y0, y1 = int(math.floor(py)) - r, int(math.ceil(py)) + r + 1
        x0, x1 = int(math.floor(px)) - r, int(math.ceil(px)) + r + 1
        for y in range(max(0, y0), min(h, y1)):
            for x in range(max(0, x0), min(w, x1)):
                if (y - py) ** 2 + (x - px) ** 2 <= half_width ** 2:
                    canvas[y, x] = level


def spiral_image(size=96, m=256.0, background=40.0, level=120.0,
                 spiral_width=5.0, curve_width=2.0):
    """Bright spiral plus two thin confounder arcs on a dark background.

    The spiral is wide enough for a Gaussian-capped probe to enter; the
    arcs are not.  All values are on the inverted scale.
    """
    f = np.full((size, size), background, dtype=np.float64)
    c = (size - 1) / 2.0
    phi = np.linspace(0.0, 4.0 * math.pi, 600)
    rad = 4.0 + (0.42 * size - 6.0) * phi / (4.0 * math.pi)
    pts = np.column_stack([c + rad * np.sin(phi), c + rad * np.cos(phi)])
    _stamp_curve(f, pts, spiral_width / 2.0, level)
    for r_arc in (0.30 * size, 0.36 * size):
        ang = np.linspace(-2.2, -0.6, 250)
        pts = np.column_stack([c + r_arc * np.sin(ang), c + r_arc * np.cos(ang)])
        _stamp_curve(f, pts, curve_width / 2.0, level)
    return f


def _ridge_mask(size, angles, ridge_width):
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    mask = np.zeros((size, size), dtype=bool)
    for theta in angles:
        dy, dx = math.sin(theta), math.cos(theta)
        dist = np.abs((yy - c) * dx - (xx - c) * dy)
        mask |= dist <= ridge_width / 2.0
    return mask


def fundus_phantom(size=64, m=256.0, angles=(0.25, 1.35, 2.45),
                   angle_offset=0.0, ridge_width=3.0, background=60.0,
                   ridge_level=115.0):
    """Piecewise-constant vessel phantom on the inverted scale.

    Straight ridges through the centre at the given orientations stand in
    for vessels (bright); ``angle_offset`` rotates the whole content.
    Returns (image, ground_truth, zone_of_interest).
    """
    shifted = tuple(a + angle_offset for a in angles)
    gt = _ridge_mask(size, shifted, ridge_width)
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    zoi = np.hypot(yy - c, xx - c) <= size / 2.0 - 2.0
    f = np.where(gt, ridge_level, background)
    gt = gt & zoi
    return f, gt, zoi


def fundus_phantom_rgb(size=64, angles=(0.25, 1.35, 2.45), ridge_width=3.0):
    """Colour counterpart: orange disc, dark red vessels, black corners.

    Returns (rgb uint8, ground_truth, zone_of_interest).
    """
    gt_full = _ridge_mask(size, angles, ridge_width)
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    zoi = np.hypot(yy - c, xx - c) <= size / 2.0 - 2.0
    rgb = np.zeros((size, size, 3), dtype=np.uint8)
    rgb[zoi] = (180, 120, 60)
    rgb[gt_full & zoi] = (60, 20, 20)
    return rgb, gt_full & zoi, zoi
