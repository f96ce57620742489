"""Residue operators: top-hats, bump detectors, differences of openings.

A residue subtracts one morphological transform from another.  When the
subtraction is the bounded LIP difference and both transforms commute with
LIP-added constants, the residue cancels uniform lighting changes exactly;
the classical counterparts only cancel ordinary additive shifts.
"""

import numpy as np

from .image import check_image
from .morphology import (_cand_lip_add, _gather, _run_rows, _check_sf,
                         lip_diff_maps, log_erode, log_opening, opening,
                         closing)

__all__ = [
    "top_hat", "bottom_hat", "lip_top_hat",
    "extended_top_hat", "extended_lip_top_hat",
    "bump_left", "bump_right", "bump_detector",
    "diff_of_openings", "diff_of_log_openings",
]


def top_hat(f, se, threads=1):
    """Peaks narrower than the flat SE: ``f - opening(f)``. Non-negative."""
    if not se.is_flat:
        raise ValueError("top_hat requires a flat SE; see extended_top_hat")
    return np.asarray(f, dtype=np.float64) - opening(f, se, threads)


def bottom_hat(f, se, threads=1):
    """Valleys narrower than the flat SE: ``closing(f) - f``. Non-negative."""
    if not se.is_flat:
        raise ValueError("bottom_hat requires a flat SE")
    return closing(f, se, threads) - np.asarray(f, dtype=np.float64)


def lip_top_hat(f, se, m=256.0, threads=1):
    """Bounded-difference top-hat with a flat SE: ``f LIP- opening(f)``."""
    if not se.is_flat:
        raise ValueError("lip_top_hat requires a flat SE")
    return lip_diff_maps(check_image(f, m), log_opening(f, se, m, threads), m)


def extended_top_hat(f, b, threads=1):
    """Residue of f by its classical opening with an arbitrary probe b."""
    return np.asarray(f, dtype=np.float64) - opening(f, b, threads)


def extended_lip_top_hat(f, b, m=256.0, threads=1):
    """Residue of f by its bounded opening with an arbitrary probe b.

    Non-negative, and insensitive to the LIP-addition of any constant to f,
    which the classical :func:`extended_top_hat` is not.
    """
    return lip_diff_maps(check_image(f, m), log_opening(f, b, m, threads), m)


def _require_restriction(b, part, name):
    full = {(int(dy), int(dx)): float(v)
            for (dy, dx), v in zip(b.offsets, b.values)}
    for (dy, dx), v in zip(part.offsets, part.values):
        key = (int(dy), int(dx))
        if key not in full or full[key] != float(v):
            raise ValueError(f"{name} is not a restriction of the probe")


def _side_detector(f, b, part, m, threads):
    """inf over the sub-support of ``f(x+h) LIP- (part(h) LIP+ floor(x))``.

    ``floor`` is the greatest constant putting the full probe in contact
    with the image from below (its bounded erosion).  Evaluated literally;
    the equivalent difference-of-erosions form lives in the test oracle.
    """
    f = check_image(f, m)
    _check_sf(b, m)
    _check_sf(part, m)
    _require_restriction(b, part, "sub-probe")
    floor = log_erode(f, b, m, threads)

    def worker(r0, r1):
        out = np.full((r1 - r0, f.shape[1]), m, dtype=np.float64)
        fl = floor[r0:r1]
        for (dy, dx), v in zip(part.offsets, part.values):
            g = _gather(f, int(dy), int(dx), m, r0, r1)
            lifted = np.where(np.isneginf(fl), -np.inf,
                              _cand_lip_add(fl, v, m))
            with np.errstate(invalid="ignore", divide="ignore"):
                cand = (g - lifted) / (1.0 - lifted / m)
            cand = np.where(lifted == m, -np.inf, cand)
            cand = np.where(np.isneginf(lifted), m, cand)
            cand = np.where(g == m, m, cand)
            np.minimum(out, cand, out)
        return out

    return _run_rows(f.shape[0], threads, worker)


def bump_left(f, b, b_left, m=256.0, threads=1):
    """Response of the left part of the probe once the whole probe is in
    contact with the image from below.  Small where the image matches the
    probe shape; large on one side of a transition."""
    return _side_detector(f, b, b_left, m, threads)


def bump_right(f, b, b_right, m=256.0, threads=1):
    """Right-part counterpart of :func:`bump_left`."""
    return _side_detector(f, b, b_right, m, threads)


def bump_detector(f, b, b_left, b_right, m=256.0, threads=1):
    """Pointwise sup of the left and right responses.

    Deep minima mark bumps similar to the probe up to a LIP-added constant;
    transitions leave one side large, so no deep minimum appears.
    """
    return np.maximum(bump_left(f, b, b_left, m, threads),
                      bump_right(f, b, b_right, m, threads))


def diff_of_openings(f, b, b_ring, threads=1):
    """Classical difference of two openings by nested probes."""
    return opening(f, b, threads) - opening(f, b_ring, threads)


def diff_of_log_openings(f, b, b_ring, m=256.0, threads=1):
    """Bounded difference of two bounded openings.

    Insensitive to LIP-added constants, hence robust to lighting drifts
    that are approximately constant at the probe scale.
    """
    return lip_diff_maps(log_opening(f, b, m, threads),
                         log_opening(f, b_ring, m, threads), m)
