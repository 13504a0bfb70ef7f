"""Color space conversions and the individual typology angle.

All functions are pure and operate on scalars or numpy arrays; pixel
triples use the trailing axis, so a single (r, g, b) tuple and an
(H, W, 3) raster go through the same code path.

Conventions (documented because the choice matters downstream):

- YCbCr uses the ITU-R BT.601 *full-range* ("JPEG") matrix, the variant
  on which the classical 136..173 Cr / 77..127 Cb skin ranges are
  defined.  Neutral chroma sits at 128.
- RGB -> Lab assumes sRGB primaries, D65 reference white, 2 degree
  observer (IEC 61966-2-1).
- Arithmetic is float64 throughout; quantization happens only when a
  caller writes pixels back to 8-bit.
"""

from __future__ import annotations

import numpy as np

# sRGB linear RGB -> XYZ, D65 white point (IEC 61966-2-1).
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)

# D65 reference white, taken as the matrix row sums so that sRGB white
# maps to exactly L = 100, a = b = 0.
_WHITE = _RGB_TO_XYZ.sum(axis=1)

# BT.601 full-range luma/chroma coefficients.
_YCBCR_MATRIX = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.168736, -0.331264, 0.5],
        [0.5, -0.418688, -0.081312],
    ]
)
_YCBCR_OFFSET = np.array([0.0, 128.0, 128.0])


def srgb_to_linear(c):
    """Inverse sRGB transfer function, [0,1] -> [0,1].

    Linear segment below 0.04045, power 2.4 above.
    """
    c = np.asarray(c, dtype=np.float64)
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(c):
    """Forward sRGB transfer function, [0,1] -> [0,1]."""
    c = np.asarray(c, dtype=np.float64)
    return np.where(c <= 0.0031308, c * 12.92, 1.055 * np.maximum(c, 0.0) ** (1 / 2.4) - 0.055)


def rgb_to_ycbcr(rgb):
    """8-bit RGB -> full-range BT.601 YCbCr, clamped to [0, 255].

    Achromatic inputs (r = g = b) map to cb = cr = 128 exactly.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    ycbcr = rgb @ _YCBCR_MATRIX.T + _YCBCR_OFFSET
    return np.clip(ycbcr, 0.0, 255.0)


def rgb_to_lab(rgb):
    """8-bit RGB -> CIELab (sRGB primaries, D65, 2 degree observer)."""
    rgb = np.asarray(rgb, dtype=np.float64) / 255.0
    xyz = srgb_to_linear(rgb) @ _RGB_TO_XYZ.T / _WHITE
    f = _lab_f(xyz)
    l = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([l, a, b], axis=-1)


def lab_to_rgb(lab):
    """CIELab -> 8-bit RGB (rounded, clamped). Inverse of rgb_to_lab."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    xyz = _lab_f_inv(np.stack([fx, fy, fz], axis=-1)) * _WHITE
    rgb = linear_to_srgb(xyz @ _XYZ_TO_RGB.T) * 255.0
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def _lab_f(t):
    # CIE cube-root compression with the linear toe below (6/29)^3.
    delta = 6.0 / 29.0
    return np.where(t > delta**3, np.cbrt(t), t / (3 * delta**2) + 4.0 / 29.0)


def _lab_f_inv(f):
    delta = 6.0 / 29.0
    return np.where(f > delta, f**3, 3 * delta**2 * (f - 4.0 / 29.0))


def ita(l, b):
    """Individual typology angle in degrees.

    ITA = arctan((L - 50) / b) * 180 / pi, evaluated as atan2(L - 50, b)
    so b = 0 extends continuously to +/-90 instead of dividing by zero.
    Negative b lands in the outer atan2 quadrants and is folded back into
    [-90, +90]; callers should flag such pixels as outside the skin-tone
    model (equivalent to using |b|).
    """
    raw = np.degrees(np.arctan2(np.asarray(l, dtype=np.float64) - 50.0, b))
    return np.where(np.abs(raw) > 90.0, np.sign(raw) * 180.0 - raw, raw)
