"""File formats: PGM (P5), PNG via Pillow, and a raw float-map container.

Operator outputs often leave [0, 255] (erosions go negative, distance maps
reach M), so 8-bit files cannot carry them losslessly.  The float map is a
16-byte header (magic ``LGM1``, u32 width, u32 height, f32 bound M, little
endian) followed by row-major float32 samples.
"""

import struct

import numpy as np
from PIL import Image

__all__ = [
    "read_image",
    "read_grey",
    "write_grey_u8",
    "write_rgb_u8",
    "write_float_map",
    "read_float_map",
    "to_u8",
]

_MAGIC = b"LGM1"


def read_image(path):
    """Grey (H, W) or colour (H, W, 3) float64 array from a raster file."""
    with Image.open(path) as im:
        if im.mode in ("RGB", "RGBA", "P"):
            arr = np.asarray(im.convert("RGB"), dtype=np.float64)
        else:
            arr = np.asarray(im.convert("L"), dtype=np.float64)
    return arr


def read_grey(path):
    """Grey float64 array; colour input is reduced by the luminance weights
    of :func:`logmorph.lip.lip_luminance` without the scale inversion."""
    arr = read_image(path)
    if arr.ndim == 3:
        arr = 0.299 * arr[..., 0] + 0.587 * arr[..., 1] + 0.114 * arr[..., 2]
    return arr


def _check_u8(arr):
    arr = np.asarray(arr)
    if np.any((arr < 0) | (arr > 255)) or np.any(arr != np.floor(arr)):
        raise ValueError("expected integer values in [0, 255]; scale first")
    return arr.astype(np.uint8)


def _write_pgm(path, arr):
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())


def write_grey_u8(path, arr):
    arr = _check_u8(arr)
    if str(path).lower().endswith(".pgm"):
        _write_pgm(str(path), arr)
    else:
        Image.fromarray(arr, mode="L").save(str(path))


def write_rgb_u8(path, arr):
    arr = _check_u8(arr)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) array")
    Image.fromarray(arr, mode="RGB").save(str(path))


def write_float_map(path, arr, m=256.0):
    arr = np.asarray(arr, dtype=np.float32)
    if arr.ndim != 2:
        raise ValueError("float maps are 2-D")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIIf", _MAGIC, arr.shape[1], arr.shape[0],
                             float(m)))
        fh.write(arr.tobytes())


def read_float_map(path):
    """Returns (float64 array, bound m)."""
    with open(path, "rb") as fh:
        header = fh.read(16)
        magic, width, height, m = struct.unpack("<4sIIf", header)
        if magic != _MAGIC:
            raise ValueError(f"not a float map: bad magic {magic!r}")
        data = np.frombuffer(fh.read(), dtype="<f4", count=width * height)
    return data.reshape(height, width).astype(np.float64), float(m)


def to_u8(arr, mode="clamp"):
    """Quantize a real map to 8 bits.

    ``clamp`` rounds and clips into [0, 255]; ``minmax`` rescales the full
    value range onto [0, 255] first (constant maps go to 0).
    """
    arr = np.asarray(arr, dtype=np.float64)
    finite = np.isfinite(arr)
    if mode == "minmax":
        lo = arr[finite].min() if finite.any() else 0.0
        hi = arr[finite].max() if finite.any() else 1.0
        span = hi - lo
        arr = (arr - lo) * (255.0 / span) if span > 0 else np.zeros_like(arr)
    elif mode != "clamp":
        raise ValueError("scale mode must be 'clamp' or 'minmax'")
    arr = np.where(np.isneginf(arr), 0.0, arr)
    arr = np.where(np.isposinf(arr), 255.0, arr)
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)
