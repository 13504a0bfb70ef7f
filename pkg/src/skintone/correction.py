"""18%-gray color correction against a known-gray background.

The correction assumes the scene contains a region that should render as
photographic middle gray, RGB (119, 119, 119).  Per-channel factors
119 / channel_mean computed over the background are applied to every
pixel of the image, saturating at 255 (no wraparound).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSegmentationError,
    DimensionMismatchError,
    EmptyMaskError,
    ZeroChannelMeanError,
)

#: RGB value of 18% gray in 24-bit color.
GRAY_TARGET = 119.0

#: Default per-channel tolerance for the corner flood-fill fallback.
DEFAULT_FLOOD_TOLERANCE = 12


@dataclass(frozen=True)
class CorrectionFactors:
    """Per-channel multipliers that pull the background mean to 119."""

    r_const: float
    g_const: float
    b_const: float

    def __post_init__(self):
        for name, v in (("r_const", self.r_const), ("g_const", self.g_const), ("b_const", self.b_const)):
            if not (v > 0 and np.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    def as_array(self) -> np.ndarray:
        return np.array([self.r_const, self.g_const, self.b_const])


def background_mean(img: np.ndarray, bg: np.ndarray) -> tuple[float, float, float]:
    """Unquantized per-channel mean over the masked background pixels."""
    img = np.asarray(img)
    bg = np.asarray(bg, dtype=bool)
    if img.shape[:2] != bg.shape:
        raise DimensionMismatchError(f"image {img.shape[:2]} vs mask {bg.shape}")
    if not bg.any():
        raise EmptyMaskError("background mask selects no pixels")
    means = img[bg].astype(np.float64).mean(axis=0)
    return float(means[0]), float(means[1]), float(means[2])


def correction_factors(means: tuple[float, float, float]) -> CorrectionFactors:
    """Factors 119 / mean for each channel."""
    if any(m == 0 for m in means):
        raise ZeroChannelMeanError(f"background channel mean of zero: {means}")
    r, g, b = means
    return CorrectionFactors(GRAY_TARGET / r, GRAY_TARGET / g, GRAY_TARGET / b)


def apply_correction(img: np.ndarray, factors: CorrectionFactors) -> np.ndarray:
    """Rescale every pixel by the per-channel factors.

    Rounds half away from zero and saturates at 255 rather than wrapping,
    so a factor can never turn a bright pixel dark.
    """
    scaled = np.asarray(img, dtype=np.float64) * factors.as_array()
    # Inputs are non-negative, so floor(x + 0.5) is round-half-away-from-zero.
    return np.minimum(np.floor(scaled + 0.5), 255.0).astype(np.uint8)


def segment_background_fallback(
    img: np.ndarray, tolerance: int = DEFAULT_FLOOD_TOLERANCE
) -> np.ndarray:
    """Heuristic background mask: flood fill from the four corners.

    Each fill grows a 4-connected region of pixels whose channels all lie
    within ``tolerance`` of that corner's seed color; the mask is the
    union of the four fills.  Intended for mugshot-style images with a
    roughly uniform backdrop, not a substitute for real segmentation.
    """
    img = np.asarray(img)
    h, w = img.shape[:2]
    if h < 8 or w < 8:
        raise DegenerateSegmentationError(f"image {w}x{h} too small for corner fill")
    pixels = img.astype(np.int16)
    mask = np.zeros((h, w), dtype=bool)
    for seed in ((0, 0), (0, w - 1), (h - 1, 0), (h - 1, w - 1)):
        if not mask[seed]:
            _flood_fill(pixels, mask, seed, tolerance)
    coverage = mask.mean()
    if coverage > 0.95 or coverage < 0.01:
        raise DegenerateSegmentationError(
            f"fallback mask covers {coverage:.1%} of pixels; supply an explicit mask"
        )
    return mask


def _flood_fill(pixels: np.ndarray, mask: np.ndarray, seed: tuple[int, int], tol: int) -> None:
    h, w = mask.shape
    seed_color = pixels[seed]
    within = (np.abs(pixels - seed_color) <= tol).all(axis=-1)
    queue = deque([seed])
    mask[seed] = True
    while queue:
        y, x = queue.popleft()
        for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
            if 0 <= ny < h and 0 <= nx < w and within[ny, nx] and not mask[ny, nx]:
                mask[ny, nx] = True
                queue.append((ny, nx))


def correct_image(
    img: np.ndarray, bg: np.ndarray | None = None, tolerance: int = DEFAULT_FLOOD_TOLERANCE
) -> tuple[np.ndarray, CorrectionFactors, int]:
    """Full correction step: mask (or fallback), factors, rescale.

    Returns the corrected image, the factors, and the background pixel
    count used to derive them.
    """
    if bg is None:
        bg = segment_background_fallback(img, tolerance)
    means = background_mean(img, bg)
    factors = correction_factors(means)
    return apply_correction(img, factors), factors, int(np.asarray(bg, dtype=bool).sum())
