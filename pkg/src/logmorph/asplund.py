"""Asplund distance maps and the morphological gradient family.

The Asplund map double-probes the image with the same structuring function:
per pixel it finds the least constant whose LIP-addition lifts the probe
into contact with the image from above (the mlub) and the greatest constant
keeping it in contact from below (the mglb), then takes their bounded
difference.  Because both contact constants shift with any constant
LIP-added to the image, the map is invariant under uniform lighting
changes.  The tolerant variant discards a fraction of extreme window
samples through rank filters, trading exactness for noise robustness.
"""

import numpy as np

from . import morphology
from .image import check_image
from .morphology import (_cand_lip_sub, _check_sf, _extremal, lip_diff_maps,
                         log_erode, log_rank_min)
from .util import round_half_away

__all__ = [
    "tolerance_counts",
    "mlub",
    "mglb",
    "asplund_map",
    "asplund_map_tol",
    "classical_tol_map",
    "gradient",
    "lip_gradient",
]


def tolerance_counts(p, support_size):
    """Discard counts (n_suppr, n1, n2) for tolerance percentage ``p``.

    ``n_suppr = round((1 - p) * support_size)`` samples are dropped in
    total, split as ``n1 = round(n_suppr / 2)`` from the upper contact and
    ``n2 = n_suppr - n1`` from the lower one.  Rounding is half away from
    zero.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("tolerance percentage must lie in (0, 1]")
    n_suppr = round_half_away((1.0 - p) * support_size)
    if n_suppr >= support_size:
        raise ValueError("tolerance would discard the whole support")
    n1 = round_half_away(n_suppr / 2.0)
    return n_suppr, n1, n_suppr - n1


def mlub(f, b, m=256.0, threads=1):
    """Map of least upper bounds: sup of ``lip_sub(f(x + h), b(h))``.

    Equal to the bounded dilation of f by the LIP-negated reflection of b.
    """
    f = check_image(f, m)
    _check_sf(b, m)
    return _extremal(f, b, m, +1, _cand_lip_sub, np.maximum, -np.inf, threads)


def mglb(f, b, m=256.0, threads=1):
    """Map of greatest lower bounds; identical to the bounded erosion by b."""
    return log_erode(f, b, m, threads)


def asplund_map(f, b, m=256.0, threads=1):
    """Pointwise Asplund distance between the image and the probe ``b``."""
    return lip_diff_maps(mlub(f, b, m, threads), mglb(f, b, m, threads), m)


def asplund_map_tol(f, b, p, m=256.0, threads=1):
    """Asplund distance map with a tolerance to extrema.

    The upper contact uses the n1-th greatest candidate and the lower one
    the n2-th smallest, with counts derived from ``p`` by
    :func:`tolerance_counts`.  ``p = 1`` reproduces :func:`asplund_map`.
    """
    _, n1, n2 = tolerance_counts(p, b.size)
    hi = morphology.log_rank_max(f, b.reflect().lip_negated(m), n1, m, threads)
    lo = log_rank_min(f, b, n2, m, threads)
    return lip_diff_maps(hi, lo, m)


def classical_tol_map(f, b, p, threads=1):
    """Classical-arithmetic counterpart of the tolerant Asplund map.

    Rank-filtered upper probing minus rank-filtered lower probing with
    ordinary + and -.  Shift-equivariant under ``f + c`` but not invariant
    under LIP-addition of a constant.
    """
    _, n1, n2 = tolerance_counts(p, b.size)
    hi = morphology.rank_max(f, b.reflect().negated(), n1, threads)
    lo = morphology.rank_min(f, b, n2, threads)
    return hi - lo


def gradient(f, se, threads=1):
    """Classical morphological gradient: dilation minus erosion, flat SE only."""
    if not se.is_flat:
        raise ValueError("the morphological gradient requires a flat SE")
    return morphology.dilate(f, se, threads) - morphology.erode(f, se, threads)


def lip_gradient(f, se, m=256.0, threads=1):
    """Bounded-difference gradient: dilation LIP-minus erosion, flat SE only.

    With a flat SE the classical and bounded dilations/erosions coincide on
    images, so only the residue law changes; the result is invariant under
    LIP-added constants.
    """
    if not se.is_flat:
        raise ValueError("the LIP gradient requires a flat SE")
    return lip_diff_maps(morphology.log_dilate(f, se, m, threads),
                         morphology.log_erode(f, se, m, threads), m)
