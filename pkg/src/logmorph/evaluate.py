"""Darkening generator and segmentation metrics.

The darkening field models a non-uniform exposure loss growing with the
distance from the field-of-view centre; LIP-adding it to the inverted
channels and flooring reproduces an 8-bit darkened photograph exactly.
Metrics are confusion counts plus a trapezoidal ROC AUC computed from the
vesselness map, restricted to the zone of interest unless asked otherwise.
"""

from dataclasses import dataclass

import numpy as np

from .lip import lip_add

__all__ = [
    "DarkeningParams",
    "darkening_field",
    "darken_channel",
    "darken_rgb",
    "fit_zoi_circle",
    "SegMetrics",
    "confusion",
    "auc_from_map",
    "relative_auc_diff",
]

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class DarkeningParams:
    """Centre (x, y), field-of-view radius and darkening intensity."""

    center_x: float
    center_y: float
    radius: float
    intensity: float = 230.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.intensity < 0:
            raise ValueError("intensity must be non-negative")


def darkening_field(params, height, width, m=256.0):
    """Radial darkening values: ``I0 * (1 - exp(-rho / (R/4)))``.

    Zero at the centre, approaching ``I0`` outward; radially symmetric.
    """
    if not params.intensity < m:
        raise ValueError(f"darkening intensity must stay below the bound {m}")
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    rho = np.hypot(xx - params.center_x, yy - params.center_y)
    return params.intensity * -np.expm1(-rho / (params.radius / 4.0))


def darken_channel(channel, dark, m=256.0):
    """Darken one 8-bit channel: ``(m-1) - floor(lip_add(m-1-f, dark))``.

    ``channel`` must be integer-valued in [0, m-1]; the output is again
    integer-valued in [0, m-1], exactly as an 8-bit file would store it.
    """
    channel = np.asarray(channel, dtype=np.float64)
    if np.any(channel != np.floor(channel)):
        raise ValueError("channel must be integer-valued")
    if np.any((channel < 0) | (channel > m - 1)):
        raise ValueError(f"channel values must lie in [0, {m - 1}]")
    inverted = (m - 1.0) - channel
    return (m - 1.0) - np.floor(lip_add(inverted, dark, m))


def darken_rgb(rgb, dark, m=256.0):
    """Apply :func:`darken_channel` to each colour plane."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) colour image")
    return np.stack([darken_channel(rgb[..., i], dark, m) for i in range(3)],
                    axis=2)


def fit_zoi_circle(mask, intensity=230.0):
    """Darkening parameters from a field-of-view mask: centroid centre and
    equivalent-area radius."""
    mask = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(mask)
    if len(ys) == 0:
        raise ValueError("empty zone of interest")
    radius = np.sqrt(len(ys) / np.pi)
    return DarkeningParams(float(xs.mean()), float(ys.mean()), float(radius),
                           intensity)


@dataclass(frozen=True)
class SegMetrics:
    """Confusion counts with the derived ratios."""

    tp: int
    fp: int
    tn: int
    fn: int
    auc: float | None = None

    @property
    def accuracy(self):
        return (self.tp + self.tn) / (self.tp + self.tn + self.fp + self.fn)

    @property
    def sensitivity(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else float("nan")

    @property
    def specificity(self):
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else float("nan")


def confusion(mask, truth, zoi=None, auc=None):
    """Confusion counts of a binary mask against the ground truth.

    Evaluation is restricted to ``zoi`` when given; pixels outside it never
    influence the counts.
    """
    mask = np.asarray(mask, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if mask.shape != truth.shape:
        raise ValueError("mask and ground-truth shapes differ")
    if zoi is not None:
        zoi = np.asarray(zoi, dtype=bool)
        if zoi.shape != mask.shape:
            raise ValueError("zone-of-interest shape differs")
        mask, truth = mask[zoi], truth[zoi]
    tp = int(np.sum(mask & truth))
    fp = int(np.sum(mask & ~truth))
    tn = int(np.sum(~mask & ~truth))
    fn = int(np.sum(~mask & truth))
    return SegMetrics(tp, fp, tn, fn, auc)


def _roc_auc(scores, labels):
    if not labels.any() or labels.all():
        raise ValueError("AUC needs both classes present")
    order = np.argsort(-scores, kind="mergesort")
    s, y = scores[order], labels[order]
    # one ROC vertex per distinct score, ties grouped
    last = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    tp = np.cumsum(y)[last]
    fp = (last + 1) - tp
    tpr = np.r_[0.0, tp / tp[-1]]
    fpr = np.r_[0.0, fp / fp[-1]]
    return float(_trapezoid(tpr, fpr))


def auc_from_map(vmap, truth, zoi=None):
    """Area under the ROC curve of a vesselness map against the truth.

    Vessels are valleys of the map, so the negated map serves as score.
    The threshold sweep visits every distinct value (trapezoidal
    integration, ties grouped); restricted to ``zoi`` when given.
    """
    vmap = np.asarray(vmap, dtype=np.float64)
    truth = np.asarray(truth, dtype=bool)
    if zoi is not None:
        zoi = np.asarray(zoi, dtype=bool)
        vmap, truth = vmap[zoi], truth[zoi]
    return _roc_auc(-vmap.ravel(), truth.ravel())


def relative_auc_diff(auc_initial, auc_dark):
    """|initial - dark| / initial."""
    return abs(auc_initial - auc_dark) / auc_initial
