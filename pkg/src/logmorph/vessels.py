"""Vessel segmentation by oriented three-segment probes.

The probe is three parallel digital segments: a central one with higher
intensity that must fit inside the vessel relief, flanked by two lower
segments at width w.  Per orientation, the probe is put in contact with the
image from below (bounded erosion of the centre, rank-filtered erosions of
the sides) and the residues of the side segments above the contact level
form left/right responses.  Vessels leave both responses small in the
aligned orientation, so the pointwise inf over orientations and probe
scales is a vesselness map whose valleys are vessels.  Every stage uses
bounded differences, making the whole chain insensitive to LIP-added
constants, i.e. to uniform exposure changes.
"""

import configparser
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .image import (StructuringFunction, check_image, disk as disk_sf,
                    line_segment)
from .morphology import lip_diff_maps, log_erode, log_rank_min
from .util import round_half_away

__all__ = [
    "VesselProbe",
    "PipelineConfig",
    "build_probe",
    "contact_floor",
    "side_responses",
    "orientation_response",
    "vesselness",
    "segment_vessels",
    "segment_fundus",
    "estimate_zoi",
]


@dataclass(frozen=True)
class VesselProbe:
    """Three rasterized parallel segments with the origin at one extremity
    of the central one."""

    theta: float
    width: float
    length: int
    center_intensity: float
    side_intensity: float
    center: StructuringFunction = field(repr=False)
    left: StructuringFunction = field(repr=False)
    right: StructuringFunction = field(repr=False)


def build_probe(theta, width, length, center_intensity=10.0, side_intensity=0.0):
    """Rasterize the probe at orientation ``theta`` (radians).

    Segments step along (sin theta, cos theta) with unit spacing in the
    dominant axis, so all orientations carry the same pixel count.  The two
    side segments sit at perpendicular distance width/2 on each side of the
    central one.
    """
    if length < 2:
        raise ValueError("probe length must be >= 2")
    if width < 2:
        raise ValueError("probe width must be >= 2")
    if not center_intensity > side_intensity:
        raise ValueError("central segment must be more intense than the sides")
    perp = (math.cos(theta), -math.sin(theta))        # unit normal as (dy, dx)
    half = width / 2.0
    center = line_segment(length, theta, center_intensity)
    left = line_segment(length, theta, side_intensity,
                   shift=(half * perp[0], half * perp[1]))
    right = line_segment(length, theta, side_intensity,
                    shift=(-half * perp[0], -half * perp[1]))
    return VesselProbe(theta, width, length, center_intensity, side_intensity,
                       center, left, right)


@dataclass(frozen=True)
class PipelineConfig:
    """Probe bank and thresholds of the segmentation pipeline.

    ``probes`` lists (width, length) pairs, one per scale.  ``k`` is the
    noise-tolerance rank of the side segments; None derives it per probe as
    5% of the segment length, rounded.  ``threshold_fraction`` is the part
    of the zone of interest declared vessel.
    """

    probes: tuple = ((9, 9), (13, 13), (17, 17))
    orientations: int = 18
    k: int | None = None
    threshold_fraction: float = 0.12
    center_intensity: float = 10.0
    side_intensity: float = 0.0

    def __post_init__(self):
        if len(self.probes) < 1:
            raise ValueError("need at least one probe scale")
        if self.orientations < 1:
            raise ValueError("need at least one orientation")
        if not 0.0 < self.threshold_fraction < 1.0:
            raise ValueError("threshold_fraction must lie in (0, 1)")
        object.__setattr__(self, "probes",
                           tuple((int(w), int(l)) for w, l in self.probes))

    def rank_for(self, length):
        if self.k is not None:
            return int(self.k)
        return round_half_away(0.05 * length)

    def thetas(self):
        return [2.0 * math.pi * i / self.orientations
                for i in range(self.orientations)]

    @classmethod
    def from_file(cls, path):
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        with open(path) as fh:
            parser.read_file(fh)
        sec = parser["pipeline"]
        probes = tuple(
            tuple(int(t) for t in item.strip().split("x"))
            for item in sec.get("probes", "9x9, 13x13, 17x17").split(","))
        k_raw = sec.get("k", "auto").strip().lower()
        return cls(
            probes=probes,
            orientations=sec.getint("orientations", 18),
            k=None if k_raw in ("", "auto") else int(k_raw),
            threshold_fraction=sec.getfloat("threshold_fraction", 0.12),
            center_intensity=sec.getfloat("center_intensity", 10.0),
            side_intensity=sec.getfloat("side_intensity", 0.0),
        )

    def save(self, path):
        parser = configparser.ConfigParser()
        parser["pipeline"] = {
            "probes": ", ".join(f"{w}x{l}" for w, l in self.probes),
            "orientations": str(self.orientations),
            "k": "auto" if self.k is None else str(self.k),
            "threshold_fraction": str(self.threshold_fraction),
            "center_intensity": str(self.center_intensity),
            "side_intensity": str(self.side_intensity),
        }
        with open(path, "w") as fh:
            parser.write(fh)


def contact_floor(f, probe, k, m=256.0, threads=1):
    """Greatest level putting the whole probe under the image, per pixel.

    The central segment must fit entirely into the relief, so it
    contributes its exact erosion; the side segments use the k-th minimum
    to shed noisy extrema.
    """
    zc = log_erode(f, probe.center, m, threads)
    zl = log_rank_min(f, probe.left, k, m, threads)
    zr = log_rank_min(f, probe.right, k, m, threads)
    return np.minimum(zc, np.minimum(zl, zr))


def side_responses(f, probe, k, m=256.0, threads=1):
    """(left, right) residues of the side contacts above the probe floor."""
    zc = log_erode(f, probe.center, m, threads)
    zl = log_rank_min(f, probe.left, k, m, threads)
    zr = log_rank_min(f, probe.right, k, m, threads)
    floor = np.minimum(zc, np.minimum(zl, zr))
    return lip_diff_maps(zl, floor, m), lip_diff_maps(zr, floor, m)


def orientation_response(f, probe, k, m=256.0, threads=1):
    """Pointwise sup of the left and right responses for one orientation."""
    left, right = side_responses(f, probe, k, m, threads)
    return np.maximum(left, right)


def vesselness(f, config, m=256.0, threads=1):
    """Pointwise inf of the oriented responses over all scales.

    ``f`` is a luminance image on the inverted scale (vessels bright).
    Vessels come out as valleys of the returned map.  The reduction order
    over orientations and scales is immaterial (pointwise inf).
    """
    f = check_image(f, m)
    out = None
    for width, length in config.probes:
        k = config.rank_for(length)
        for theta in config.thetas():
            probe = build_probe(theta, width, length,
                                config.center_intensity, config.side_intensity)
            resp = orientation_response(f, probe, k, m, threads)
            out = resp if out is None else np.minimum(out, resp)
    return out


def segment_vessels(vmap, zoi, fraction):
    """Select the lowest-valued ``fraction`` of the zone of interest.

    Exactly ``round(fraction * area)`` pixels are kept (half away from
    zero), ties resolved in row-major scan order; smaller fractions give
    nested masks.
    """
    vmap = np.asarray(vmap, dtype=np.float64)
    zoi = np.asarray(zoi, dtype=bool)
    if vmap.shape != zoi.shape:
        raise ValueError("map and zone of interest shapes differ")
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    flat_idx = np.flatnonzero(zoi.ravel())
    count = min(round_half_away(fraction * len(flat_idx)), len(flat_idx))
    mask = np.zeros(vmap.size, dtype=bool)
    if count:
        order = np.argsort(vmap.ravel()[flat_idx], kind="stable")
        mask[flat_idx[order[:count]]] = True
    return mask.reshape(vmap.shape)


def segment_fundus(img, config, m=256.0, zoi=None, threads=1, lip_input=False):
    """Full pipeline on a photograph: luminance, vesselness, threshold.

    Colour input is reduced with the inverted-scale luminance; grey input
    is inverted as ``(m-1) - f`` unless ``lip_input`` says it already is a
    luminance on the inverted scale.  Returns (mask, vesselness map, zoi).
    """
    from .lip import lip_luminance
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 3:
        f = lip_luminance(img[..., 0], img[..., 1], img[..., 2], m)
    elif lip_input:
        f = img
    else:
        f = (m - 1.0) - img
    if zoi is None:
        zoi = estimate_zoi(img if not lip_input else (m - 1.0) - img)
    vmap = vesselness(f, config, m, threads)
    mask = segment_vessels(vmap, zoi, config.threshold_fraction)
    return mask, vmap, zoi


def estimate_zoi(img, floor=20.0, closing_radius=5):
    """Field-of-view mask of a fundus photograph (conventional scale).

    Largest connected region brighter than ``floor`` (channel mean for
    colour input), morphologically closed and hole-filled.
    """
    img = np.asarray(img, dtype=np.float64)
    brightness = img.mean(axis=2) if img.ndim == 3 else img
    bright = brightness > floor
    if not bright.any():
        raise ValueError("no pixels above the intensity floor")
    labels, _ = ndimage.label(bright)
    largest = 1 + np.argmax(np.bincount(labels.ravel())[1:])
    mask = labels == largest
    if closing_radius >= 1:
        foot, _ = disk_sf(closing_radius).to_array()
        foot = np.isfinite(foot)
        r = closing_radius
        padded = np.pad(mask, r)
        padded = ndimage.binary_closing(padded, structure=foot)
        mask = padded[r:-r, r:-r]
    return ndimage.binary_fill_holes(mask)
