import numpy as np
import pytest

from logmorph.image import StructuringFunction
from logmorph.selftest import max_abs_diff  # noqa: F401  (re-used by tests)


def random_sf(rng, box=2, lo=0.0, hi=120.0, density=0.4):
    """Random sparse structuring function inside a (2*box+1)^2 window."""
    offs = [(dy, dx)
            for dy in range(-box, box + 1) for dx in range(-box, box + 1)
            if rng.random() < density]
    if not offs:
        offs = [(0, 0)]
    return StructuringFunction(np.array(offs), rng.uniform(lo, hi, len(offs)))


def random_image(rng, shape=(16, 16), lo=0.0, hi=255.5):
    return rng.uniform(lo, hi, shape)


def dice(a, b):
    return 2.0 * np.sum(a & b) / (np.sum(a) + np.sum(b))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
