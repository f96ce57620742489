"""Scalar grey-value arithmetic on the bounded logarithmic scale.

Grey values live in [0, M[ where 0 is white (full transmittance) and M is
the opaque black bound (256 for 8-bit data).  Superimposing two
semi-transparent layers multiplies their transmittances ``T = 1 - f/M``,
which induces a bounded addition on grey values:

    lip_add(f, g) = f + g - f*g/M

Together with the negation ``-f / (1 - f/M)`` this makes the functions
bounded by M a real vector space; ordinary images are its positive cone.
Values may be arbitrarily negative (physically: light intensifiers), but the
scale is completed by the sentinels -inf and M.  This module rejects
arithmetic on the sentinels: the sliding-window operators define their own
per-operator conventions and apply them where needed.

All functions broadcast over numpy arrays; ``m`` is the bound shared by
every operand of a call.
"""

import numpy as np

__all__ = [
    "lip_add",
    "lip_negate",
    "lip_sub",
    "lip_scalar_mul",
    "to_additive",
    "from_additive",
    "lip_luminance",
]


def _check_open_range(x, m, what):
    """Reject NaN, sentinels and out-of-scale values: require -inf < x < m."""
    if np.any(np.isnan(x)):
        raise ValueError(f"{what} contains NaN")
    if not np.all((x < m) & (x > -np.inf)):
        raise ValueError(f"{what} must lie in (-inf, {m}); sentinel arithmetic "
                         "is handled by the window operators, not here")


def lip_add(a, b, m=256.0):
    """Bounded addition of grey values: ``a + b - a*b/m``.

    Commutative and associative, with neutral element 0; the result stays
    strictly below ``m`` whenever both operands do.  Physically this is the
    superimposition of the two semi-transparent layers producing ``a`` and
    ``b``.

    Raises ValueError when an operand is NaN, -inf, or >= m.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_open_range(a, m, "lip_add operand")
    _check_open_range(b, m, "lip_add operand")
    return a + b - a * b / m


def lip_negate(a, m=256.0):
    """Opposite grey value: ``-a / (1 - a/m)``.

    Involution (negating twice restores the value); non-positive for
    ordinary image values.  Negative values act as light intensifiers:
    ``lip_add(a, lip_negate(a)) == 0``.
    """
    a = np.asarray(a, dtype=np.float64)
    _check_open_range(a, m, "lip_negate operand")
    return -a / (1.0 - a / m)


def lip_sub(a, b, m=256.0):
    """Bounded difference ``(a - b) / (1 - b/m)``, i.e. lip_add(a, lip_negate(b)).

    Non-negative exactly when ``a >= b``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_open_range(a, m, "lip_sub operand")
    _check_open_range(b, m, "lip_sub subtrahend")
    return (a - b) / (1.0 - b / m)


def lip_scalar_mul(lam, a, m=256.0):
    """Scale a grey value by a real factor: ``m - m*(1 - a/m)**lam``.

    Models a thickness/opacity change of the layer by the factor ``lam``:
    factors above 1 darken, factors in [0, 1] brighten.  ``lam = 2`` agrees
    with ``lip_add(a, a)``.  The bound ``a = m`` is accepted here and maps
    to ``m`` for ``lam > 0`` and to 0 for ``lam = 0``.
    """
    a = np.asarray(a, dtype=np.float64)
    if np.any(np.isnan(a)) or not np.all((a <= m) & (a > -np.inf)):
        raise ValueError(f"lip_scalar_mul operand must lie in (-inf, {m}]")
    return m - m * (1.0 - a / m) ** float(lam)


def to_additive(a, m=256.0):
    """Map the bounded scale onto the ordinary additive scale.

    ``-m * log(1 - a/m)`` is a strictly increasing bijection of [-inf, m]
    onto [-inf, +inf] that turns lip_add into + and lip_sub into -.  The
    sentinels map to -inf and +inf respectively.
    """
    a = np.asarray(a, dtype=np.float64)
    if np.any(np.isnan(a)) or np.any(a > m):
        raise ValueError(f"to_additive operand must lie in [-inf, {m}]")
    with np.errstate(divide="ignore"):
        return -m * np.log1p(-a / m)


def from_additive(v, m=256.0):
    """Inverse of :func:`to_additive`: ``m * (1 - exp(-v/m))``."""
    v = np.asarray(v, dtype=np.float64)
    if np.any(np.isnan(v)):
        raise ValueError("from_additive operand contains NaN")
    with np.errstate(over="ignore"):
        return m * -np.expm1(-v / m)


def lip_luminance(red, green, blue, m=256.0):
    """Luminance of an RGB triple on the inverted (logarithmic) scale.

    ``(m-1) - (0.299 R + 0.587 G + 0.114 B)``: pure white maps to 0 and
    black to ``m-1``, so dense objects come out bright.  Channels must lie
    in [0, m-1].
    """
    red = np.asarray(red, dtype=np.float64)
    green = np.asarray(green, dtype=np.float64)
    blue = np.asarray(blue, dtype=np.float64)
    for name, ch in (("red", red), ("green", green), ("blue", blue)):
        if np.any(np.isnan(ch)) or not np.all((ch >= 0) & (ch <= m - 1)):
            raise ValueError(f"{name} channel must lie in [0, {m - 1}]")
    return (m - 1.0) - (0.299 * red + 0.587 * green + 0.114 * blue)
