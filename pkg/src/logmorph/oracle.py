"""Brute-force reference implementations used by the test suite.

Everything here evaluates the defining formulas literally with scalar Python
loops and shares no kernel code with the fast paths, so a disagreement
between the two always points at a real defect.  Inputs are size-guarded:
these run in O(pixels * support) or worse and exist only to check small
images.
"""

import math

import numpy as np

from .image import StructuringFunction
from .util import round_half_away

_MAX_PIXELS = 64 * 64


def _guard(f):
    f = np.asarray(f, dtype=np.float64)
    if f.size > _MAX_PIXELS:
        raise ValueError("oracle inputs are limited to 64x64 pixels")
    return f


# scalar laws, written out with explicit convention branches

def _ladd(a, v, m):
    if a == -math.inf or v == -math.inf:
        return -math.inf
    if a == m:
        return m
    return a + v - a * v / m


def _lsub(a, v, m):
    if a == m or v == -math.inf:
        return m
    return (a - v) / (1.0 - v / m)


def _window(f, y, x, b, sign):
    h, w = f.shape
    out = []
    for (dy, dx), v in zip(b.offsets, b.values):
        yy, xx = y + sign * int(dy), x + sign * int(dx)
        if 0 <= yy < h and 0 <= xx < w:
            out.append((f[yy, xx], float(v)))
    return out


def _pointwise(f, b, sign, fold):
    f = _guard(f)
    out = np.empty_like(f)
    for y in range(f.shape[0]):
        for x in range(f.shape[1]):
            out[y, x] = fold(_window(f, y, x, b, sign))
    return out


def naive_dilate(f, b):
    return _pointwise(f, b, -1, lambda win: max(
        (fv + v for fv, v in win), default=-math.inf))


def naive_erode(f, b):
    return _pointwise(f, b, +1, lambda win: min(
        (fv - v for fv, v in win), default=math.inf))


def naive_log_dilate(f, b, m=256.0):
    return _pointwise(f, b, -1, lambda win: max(
        (_ladd(fv, v, m) for fv, v in win), default=-math.inf))


def naive_log_erode(f, b, m=256.0):
    return _pointwise(f, b, +1, lambda win: min(
        (_lsub(fv, v, m) for fv, v in win), default=m))


def naive_opening(f, b):
    return naive_dilate(naive_erode(f, b), b)


def naive_log_opening(f, b, m=256.0):
    return naive_log_dilate(naive_log_erode(f, b, m), b, m)


def _kth(sorted_values, k, neutral):
    if not sorted_values:
        return neutral
    return sorted_values[min(k, len(sorted_values) - 1)]


def naive_rank_min(f, b, k):
    return _pointwise(f, b, +1, lambda win: _kth(
        sorted(fv - v for fv, v in win), k, math.inf))


def naive_rank_max(f, b, k):
    return _pointwise(f, b, -1, lambda win: _kth(
        sorted((fv + v for fv, v in win), reverse=True), k, -math.inf))


def naive_log_rank_min(f, b, k, m=256.0):
    return _pointwise(f, b, +1, lambda win: _kth(
        sorted(_lsub(fv, v, m) for fv, v in win), k, m))


def naive_log_rank_max(f, b, k, m=256.0):
    return _pointwise(f, b, -1, lambda win: _kth(
        sorted((_ladd(fv, v, m) for fv, v in win), reverse=True), k, -math.inf))


def naive_mlub(f, b, m=256.0):
    """Least constant lifting the probe into contact from above, per pixel."""
    return _pointwise(f, b, +1, lambda win: max(
        (_lsub(fv, v, m) for fv, v in win), default=-math.inf))


def naive_mglb(f, b, m=256.0):
    """Greatest constant keeping the lifted probe below f, per pixel."""
    return naive_log_erode(f, b, m)


def _asp_combine(hi, lo, m):
    if hi == m or lo == -math.inf:
        return m
    if hi == lo:
        return 0.0
    return (hi - lo) / (1.0 - lo / m)


def naive_asplund_map(f, b, m=256.0):
    hi, lo = naive_mlub(f, b, m), naive_mglb(f, b, m)
    out = np.empty_like(hi)
    for idx in np.ndindex(hi.shape):
        out[idx] = _asp_combine(hi[idx], lo[idx], m)
    return out


def naive_asplund_map_tol(f, b, p, m=256.0):
    n_suppr = round_half_away((1.0 - p) * b.size)
    n1 = round_half_away(n_suppr / 2.0)
    n2 = n_suppr - n1
    hi = _pointwise(f, b, +1, lambda win: _kth(
        sorted((_lsub(fv, v, m) for fv, v in win), reverse=True), n1, -math.inf))
    lo = naive_log_rank_min(f, b, n2, m)
    out = np.empty_like(hi)
    for idx in np.ndindex(hi.shape):
        out[idx] = _asp_combine(hi[idx], lo[idx], m)
    return out


# isomorphism route: run the classical kernel on the unbounded scale

def _xi_sf(b, m):
    vals = np.asarray([-m * math.log(1.0 - v / m) for v in b.values])
    return StructuringFunction(b.offsets, vals)


def _xi(f, m):
    with np.errstate(divide="ignore"):
        return -m * np.log(1.0 - np.asarray(f, dtype=np.float64) / m)


def _xi_inv(v, m):
    with np.errstate(over="ignore"):
        return m * (1.0 - np.exp(-np.asarray(v, dtype=np.float64) / m))


def log_dilate_via_isomorphism(f, b, m=256.0, kernel=None):
    from . import morphology
    kernel = kernel or morphology.dilate
    return _xi_inv(kernel(_xi(f, m), _xi_sf(b, m)), m)


def log_erode_via_isomorphism(f, b, m=256.0, kernel=None):
    from . import morphology
    kernel = kernel or morphology.erode
    return _xi_inv(kernel(_xi(f, m), _xi_sf(b, m)), m)


def log_rank_min_via_isomorphism(f, b, k, m=256.0):
    from . import morphology
    return _xi_inv(morphology.rank_min(_xi(f, m), _xi_sf(b, m), k), m)


def log_rank_max_via_isomorphism(f, b, k, m=256.0):
    from . import morphology
    return _xi_inv(morphology.rank_max(_xi(f, m), _xi_sf(b, m), k), m)


# rank-statistic AUC: probability a positive outranks a negative, ties half

def rank_auc(scores, labels):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    pos, neg = scores[labels], scores[~labels]
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need both positive and negative samples")
    wins = 0.0
    for p in pos:
        wins += np.sum(p > neg) + 0.5 * np.sum(p == neg)
    return wins / (len(pos) * len(neg))


# scalar darkening: one 8-bit value through the published recipe

def darken_value(value, dark, m=256.0):
    a = (m - 1.0) - float(value)
    s = a + dark - a * dark / m
    return int((m - 1.0) - math.floor(s))
