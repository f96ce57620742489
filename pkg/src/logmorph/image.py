"""Image grids and finitely supported structuring functions.

Images are plain 2-D float64 arrays with values in [-inf, M]; binary masks
are plain bool arrays of the same shape.  The only dedicated type is the
structuring function: a finite set of integer (dy, dx) offsets around an
origin, each carrying a grey value.  Outside its support the function is
-inf by definition, so -inf never appears among the stored values.  A
structuring function whose stored values are all exactly 0 is flat (a
structuring element in the classical sense).
"""

import math
from dataclasses import dataclass

import numpy as np

from .lip import lip_negate

__all__ = [
    "StructuringFunction",
    "disk",
    "half_sphere",
    "ring",
    "gaussian_ring",
    "line_segment",
    "from_array",
    "negate_image",
    "check_image",
]


@dataclass(frozen=True)
class StructuringFunction:
    """Finite support ``offsets`` ((n, 2) int array of (dy, dx)) with one
    grey ``value`` per offset.  Immutable; safe to share across threads."""

    offsets: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        offsets = np.atleast_2d(np.asarray(self.offsets, dtype=np.int64))
        values = np.atleast_1d(np.asarray(self.values, dtype=np.float64))
        if offsets.ndim != 2 or offsets.shape[1] != 2:
            raise ValueError("offsets must be an (n, 2) array of (dy, dx)")
        if values.shape != (offsets.shape[0],):
            raise ValueError("values must have one entry per offset")
        if offsets.shape[0] == 0:
            raise ValueError("support must be non-empty")
        if len({(int(dy), int(dx)) for dy, dx in offsets}) != offsets.shape[0]:
            raise ValueError("duplicate offsets in support")
        if np.any(~np.isfinite(values)):
            raise ValueError("support values must be finite")
        offsets.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.offsets.shape[0]

    @property
    def is_flat(self) -> bool:
        return bool(np.all(self.values == 0.0))

    def reflect(self):
        """Support mirrored through the origin, values carried along."""
        return StructuringFunction(-self.offsets, self.values)

    def negated(self):
        """Classical pointwise negation of the values (same support)."""
        return StructuringFunction(self.offsets, -self.values)

    def lip_negated(self, m=256.0):
        """Bounded-scale negation of the values (same support)."""
        return StructuringFunction(self.offsets, lip_negate(self.values, m))

    def offset_set(self):
        return {(int(dy), int(dx)) for dy, dx in self.offsets}

    def bounding_box(self):
        """(min_dy, min_dx, max_dy, max_dx) of the support."""
        return (int(self.offsets[:, 0].min()), int(self.offsets[:, 1].min()),
                int(self.offsets[:, 0].max()), int(self.offsets[:, 1].max()))

    def to_array(self, fill=-np.inf):
        """Dense (values, origin) rendering of the support, `fill` outside."""
        y0, x0, y1, x1 = self.bounding_box()
        arr = np.full((y1 - y0 + 1, x1 - x0 + 1), fill, dtype=np.float64)
        arr[self.offsets[:, 0] - y0, self.offsets[:, 1] - x0] = self.values
        return arr, (-y0, -x0)


def _grid_offsets(radius):
    r = int(math.ceil(radius))
    dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
    return dy.ravel(), dx.ravel()


def disk(radius, value=0.0):
    """Disk support: offsets with ``dy**2 + dx**2 <= radius**2``.

    ``disk(1)`` is the 5-pixel cross.  Flat (all zeros) unless ``value``
    is given.
    """
    if radius < 1:
        raise ValueError("disk radius must be >= 1")
    dy, dx = _grid_offsets(radius)
    keep = dy * dy + dx * dx <= radius * radius
    n = int(keep.sum())
    return StructuringFunction(np.column_stack([dy[keep], dx[keep]]),
                               np.full(n, float(value)))


def half_sphere(radius, base=127.0, amplitude=None):
    """Hemispheric probe: ``base + amplitude * sqrt(1 - d**2/r**2)`` on a disk.

    The centre value is exactly ``base + amplitude``.  ``amplitude`` defaults
    to ``radius`` (one grey level per pixel of height).
    """
    if radius < 1:
        raise ValueError("half_sphere radius must be >= 1")
    if amplitude is None:
        amplitude = float(radius)
    dy, dx = _grid_offsets(radius)
    d2 = (dy * dy + dx * dx).astype(np.float64)
    keep = d2 <= radius * radius
    values = base + amplitude * np.sqrt(1.0 - d2[keep] / (radius * radius))
    return StructuringFunction(np.column_stack([dy[keep], dx[keep]]), values)


def ring(inner, outer, value=0.0):
    """Annulus support ``inner**2 <= dy**2 + dx**2 <= outer**2`` at a constant value."""
    if inner < 1 or outer <= inner:
        raise ValueError("ring needs 1 <= inner < outer")
    dy, dx = _grid_offsets(outer)
    d2 = dy * dy + dx * dx
    keep = (d2 >= inner * inner) & (d2 <= outer * outer)
    return StructuringFunction(np.column_stack([dy[keep], dx[keep]]),
                               np.full(int(keep.sum()), float(value)))


def gaussian_ring(inner, outer, ring_value, sigma, amplitude, core_radius=None):
    """Central Gaussian cap surrounded by an annulus.

    Support is the union of a disk of ``core_radius`` (default ``inner - 1``)
    carrying ``amplitude * exp(-d**2 / (2 sigma**2))`` and the
    ``inner``..``outer`` annulus carrying ``ring_value``.
    """
    if core_radius is None:
        core_radius = inner - 1
    if core_radius < 1 or core_radius >= inner:
        raise ValueError("gaussian core must satisfy 1 <= core_radius < inner")
    cap = disk(core_radius)
    d2 = np.sum(cap.offsets.astype(np.float64) ** 2, axis=1)
    cap_values = amplitude * np.exp(-d2 / (2.0 * sigma * sigma))
    rim = ring(inner, outer, ring_value)
    return StructuringFunction(np.vstack([cap.offsets, rim.offsets]),
                               np.concatenate([cap_values, rim.values]))


def line_segment(length, theta, value=0.0, shift=(0.0, 0.0)):
    """Digital line of exactly ``length`` pixels starting at ``shift``.

    Points are stepped along (sin theta, cos theta) with unit spacing in the
    dominant axis, so every orientation yields the same pixel count.  ``shift``
    is a continuous (y, x) displacement applied before rounding, used to place
    the parallel segments of a probe.
    """
    if length < 1:
        raise ValueError("segment length must be >= 1")
    c, s = math.cos(theta), math.sin(theta)
    step = 1.0 / max(abs(c), abs(s))
    t = np.arange(length, dtype=np.float64) * step
    ys = np.floor(shift[0] + t * s + 0.5).astype(np.int64)
    xs = np.floor(shift[1] + t * c + 0.5).astype(np.int64)
    seen, keep = set(), []
    for i, (y, x) in enumerate(zip(ys, xs)):
        if (y, x) not in seen:
            seen.add((y, x))
            keep.append(i)
    keep = np.asarray(keep)
    return StructuringFunction(np.column_stack([ys[keep], xs[keep]]),
                               np.full(len(keep), float(value)))


def from_array(arr, origin=None, flat=False):
    """Structuring function from a dense array; -inf entries mark holes.

    ``origin`` defaults to the array centre.  With ``flat=True`` the values
    are discarded and the finite entries become a flat support.
    """
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array")
    if origin is None:
        origin = ((arr.shape[0] - 1) // 2, (arr.shape[1] - 1) // 2)
    ys, xs = np.nonzero(np.isfinite(arr))
    values = np.zeros(len(ys)) if flat else arr[ys, xs]
    return StructuringFunction(
        np.column_stack([ys - origin[0], xs - origin[1]]), values)


def check_image(f, m=256.0, allow_negative_inf=True):
    """Validate a grey image: 2-D, float-compatible, values <= m, no NaN."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2:
        raise ValueError("grey images are 2-D arrays")
    if np.any(np.isnan(f)):
        raise ValueError("image contains NaN")
    if np.any(f > m):
        raise ValueError(f"image values must not exceed the bound {m}")
    if not allow_negative_inf and np.any(np.isneginf(f)):
        raise ValueError("-inf samples not allowed here")
    return f


def negate_image(f, m=256.0):
    """Pointwise bounded negation of an image, sentinel aware.

    The bound m maps to -inf and -inf maps back to m, the continuous limit
    of the formula on the completed scale; finite samples use the scalar law.
    Involutive on [-inf, m].
    """
    f = check_image(f, m)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -f / (1.0 - f / m)
    out = np.where(f == m, -np.inf, out)
    return np.where(np.isneginf(f), m, out)
