"""Sliding-window morphology, classical and on the bounded logarithmic scale.

Classical dilation/erosion take the extremum of ``f(x -+ h) +- b(h)`` over
the support of the structuring function.  The logarithmic variants replace
+ and - with the bounded laws, so the effective probe amplitude follows the
local image intensity and dilation can never exceed the bound M.

Conventions, applied uniformly by every kernel here:

* off-grid offsets are skipped, i.e. padded with the neutral element of the
  reduction (-inf for suprema; +inf for classical infima; M for bounded
  infima);
* ``f = -inf`` absorbs bounded and classical addition terms to -inf;
* ``f = M`` absorbs bounded difference terms to M, exactly.

Rank filters replace the extremum by the k-th smallest/greatest window
value; ``k = 0`` reproduces erosion/dilation bit for bit.  Near borders k
applies to the multiset actually gathered and is clamped to its size.

All kernels are pixel-parallel: ``threads`` splits output rows across a
thread pool and the result does not depend on the split.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .image import StructuringFunction, check_image

__all__ = [
    "dilate", "erode", "opening", "closing",
    "log_dilate", "log_erode", "log_opening", "log_closing",
    "rank_min", "rank_max", "log_rank_min", "log_rank_max",
    "lip_diff_maps",
]


# ---------------------------------------------------------------------------
# gathering machinery

def _gather(f, dy, dx, pad, r0, r1):
    """Rows r0:r1 of f translated so out[y - r0, x] = f[y + dy, x + dx]."""
    h, w = f.shape
    out = np.full((r1 - r0, w), pad, dtype=np.float64)
    y0, y1 = max(r0, -dy), min(r1, h - dy)
    x0, x1 = max(0, -dx), min(w, w - dx)
    if y0 < y1 and x0 < x1:
        out[y0 - r0:y1 - r0, x0:x1] = f[y0 + dy:y1 + dy, x0 + dx:x1 + dx]
    return out


def _in_grid_counts(shape, offsets, sign, r0, r1):
    """Number of support offsets that stay on the grid, per output pixel."""
    h, w = shape
    counts = np.zeros((r1 - r0, w), dtype=np.int32)
    for dy, dx in offsets:
        dy, dx = sign * int(dy), sign * int(dx)
        y0, y1 = max(r0, -dy), min(r1, h - dy)
        x0, x1 = max(0, -dx), min(w, w - dx)
        if y0 < y1 and x0 < x1:
            counts[y0 - r0:y1 - r0, x0:x1] += 1
    return counts


def _run_rows(height, threads, worker):
    if threads <= 1 or height < 2:
        return worker(0, height)
    threads = min(threads, height)
    bounds = np.linspace(0, height, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = list(pool.map(lambda i: worker(bounds[i], bounds[i + 1]),
                               range(threads)))
    return np.vstack(chunks)


# ---------------------------------------------------------------------------
# per-offset candidate terms

def _cand_add(g, v, m):
    return g + v


def _cand_sub(g, v, m):
    return g - v


def _cand_lip_add(g, v, m):
    # factored form never meets inf - inf; the mask keeps the bound exact
    return np.where(g == m, m, g * (1.0 - v / m) + v)


def _cand_lip_sub(g, v, m):
    return np.where(g == m, m, (g - v) / (1.0 - v / m))


def _check_sf(b, m=None):
    if not isinstance(b, StructuringFunction):
        raise TypeError("expected a StructuringFunction")
    if m is not None and not np.all(b.values < m):
        raise ValueError(f"structuring values must stay below the bound {m}")


# ---------------------------------------------------------------------------
# extremal kernels

def _extremal(f, b, m, sign, cand, reduce_ufunc, pad, threads):
    def worker(r0, r1):
        out = np.full((r1 - r0, f.shape[1]), pad, dtype=np.float64)
        for (dy, dx), v in zip(b.offsets, b.values):
            g = _gather(f, sign * int(dy), sign * int(dx), pad, r0, r1)
            reduce_ufunc(out, cand(g, v, m), out)
        return out
    return _run_rows(f.shape[0], threads, worker)


def dilate(f, b, threads=1):
    """Classical dilation: sup of ``f(x - h) + b(h)`` over the support."""
    f = np.asarray(f, dtype=np.float64)
    _check_sf(b)
    return _extremal(f, b, None, -1, _cand_add, np.maximum, -np.inf, threads)


def erode(f, b, threads=1):
    """Classical erosion: inf of ``f(x + h) - b(h)`` over the support."""
    f = np.asarray(f, dtype=np.float64)
    _check_sf(b)
    return _extremal(f, b, None, +1, _cand_sub, np.minimum, np.inf, threads)


def log_dilate(f, b, m=256.0, threads=1):
    """Bounded dilation: sup of ``lip_add(f(x - h), b(h))``; never exceeds m."""
    f = check_image(f, m)
    _check_sf(b, m)
    return _extremal(f, b, m, -1, _cand_lip_add, np.maximum, -np.inf, threads)


def log_erode(f, b, m=256.0, threads=1):
    """Bounded erosion: inf of ``lip_sub(f(x + h), b(h))``; may go negative."""
    f = check_image(f, m)
    _check_sf(b, m)
    return _extremal(f, b, m, +1, _cand_lip_sub, np.minimum, m, threads)


def opening(f, b, threads=1):
    return dilate(erode(f, b, threads), b, threads)


def closing(f, b, threads=1):
    return erode(dilate(f, b, threads), b, threads)


def log_opening(f, b, m=256.0, threads=1):
    return log_dilate(log_erode(f, b, m, threads), b, m, threads)


def log_closing(f, b, m=256.0, threads=1):
    return log_erode(log_dilate(f, b, m, threads), b, m, threads)


# ---------------------------------------------------------------------------
# rank filters

def _rank(f, b, k, m, sign, cand, pad, neutral, from_top, threads):
    n = b.size
    if not 0 <= k < n:
        raise ValueError(f"rank k={k} out of range for support of size {n}")

    def worker(r0, r1):
        stack = np.empty((n, r1 - r0, f.shape[1]), dtype=np.float64)
        for i, ((dy, dx), v) in enumerate(zip(b.offsets, b.values)):
            g = _gather(f, sign * int(dy), sign * int(dx), pad, r0, r1)
            stack[i] = cand(g, v, m)
        stack.sort(axis=0)
        valid = _in_grid_counts(f.shape, b.offsets, sign, r0, r1)
        k_eff = np.minimum(k, valid - 1)          # border windows clamp k
        if from_top:
            idx = np.minimum(n - 1 - k_eff, n - 1)  # pads sit below the valids
        else:
            idx = np.maximum(k_eff, 0)              # pads sit above the valids
        out = np.take_along_axis(stack, idx[None, :, :], axis=0)[0]
        return np.where(valid == 0, neutral, out)

    return _run_rows(f.shape[0], threads, worker)


def rank_min(f, b, k, threads=1):
    """k-th smallest of ``f(x + h) - b(h)``; k = 0 is :func:`erode`."""
    f = np.asarray(f, dtype=np.float64)
    _check_sf(b)
    return _rank(f, b, k, None, +1, _cand_sub, np.inf, np.inf, False, threads)


def rank_max(f, b, k, threads=1):
    """k-th greatest of ``f(x - h) + b(h)``; k = 0 is :func:`dilate`."""
    f = np.asarray(f, dtype=np.float64)
    _check_sf(b)
    return _rank(f, b, k, None, -1, _cand_add, -np.inf, -np.inf, True, threads)


def log_rank_min(f, b, k, m=256.0, threads=1):
    """k-th smallest of ``lip_sub(f(x + h), b(h))``; k = 0 is :func:`log_erode`."""
    f = check_image(f, m)
    _check_sf(b, m)
    return _rank(f, b, k, m, +1, _cand_lip_sub, np.inf, m, False, threads)


def log_rank_max(f, b, k, m=256.0, threads=1):
    """k-th greatest of ``lip_add(f(x - h), b(h))``; k = 0 is :func:`log_dilate`."""
    f = check_image(f, m)
    _check_sf(b, m)
    return _rank(f, b, k, m, -1, _cand_lip_add, -np.inf, -np.inf, True, threads)


# ---------------------------------------------------------------------------
# residue combination

def lip_diff_maps(a, b, m=256.0):
    """Pointwise bounded difference of two operator maps, with conventions.

    Maps produced by the kernels above live on the completed scale, so the
    plain scalar law does not always apply.  The contact conventions used by
    the distance and residue operators are: the result is m where the first
    map reaches m or the second is -inf, 0 where both maps are equal, and
    the plain LIP difference elsewhere.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (a - b) / (1.0 - b / m)
    out = np.where(a == b, 0.0, out)
    return np.where((a == m) | np.isneginf(b), m, out)
