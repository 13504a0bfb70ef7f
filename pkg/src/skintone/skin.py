"""Automated skin tone rating.

Workflow for one aligned face crop: take the face-skin mask (or the
geometric fallback), keep only pixels whose Cb/Cr chroma falls in the
classical skin ranges, average the survivors in RGB, convert the mean to
CIELab, compute the individual typology angle, and map it to one of six
skin type categories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import colorspace
from .errors import NoSkinPixelsError

# Inclusive chroma ranges for skin pixels (full-range BT.601).
CR_RANGE = (136.0, 173.0)
CB_RANGE = (77.0, 127.0)

#: Below this many filtered skin pixels the mean is considered unreliable.
DEFAULT_MIN_SKIN_PIXELS = 500

SKIN_TYPE_NAMES = ("very light", "light", "intermediate", "tan", "brown", "dark")


@dataclass(frozen=True)
class SkinType:
    """Six-level ordinal skin tone category, 1 = very light .. 6 = dark."""

    ordinal: int

    def __post_init__(self):
        if self.ordinal not in range(1, 7):
            raise ValueError(f"ordinal must be 1..6, got {self.ordinal}")

    @property
    def name(self) -> str:
        return SKIN_TYPE_NAMES[self.ordinal - 1]


@dataclass(frozen=True)
class ItaRangeTable:
    """Five decreasing ITA thresholds partitioning [-90, 90] into six cells.

    An angle equal to a boundary lands in the lighter cell (each interval
    is closed on its lower, darker side).
    """

    boundaries: tuple[float, float, float, float, float]
    provenance: str = "standard"

    def __post_init__(self):
        if len(self.boundaries) != 5:
            raise ValueError("exactly five boundaries required")
        if any(hi <= lo for hi, lo in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError(f"boundaries must strictly decrease: {self.boundaries}")

    @classmethod
    def standard(cls) -> "ItaRangeTable":
        # Classical dermatology thresholds: very light > 55 > light > 41 >
        # intermediate > 28 > tan > 10 > brown > -30 > dark.
        return cls((55.0, 41.0, 28.0, 10.0, -30.0), "standard")

    @classmethod
    def from_json(cls, path: str | Path) -> "ItaRangeTable":
        data = json.loads(Path(path).read_text())
        return cls(tuple(float(b) for b in data["boundaries"]), data.get("provenance", "custom"))

    def classify(self, ita_degrees: float) -> SkinType:
        for i, bound in enumerate(self.boundaries):
            if ita_degrees >= bound:
                return SkinType(i + 1)
        return SkinType(6)


@dataclass(frozen=True)
class FaceGeometry:
    """Fractional layout of the skin ellipse and the eye/mouth exclusions.

    Boxes are (left, top, right, bottom) fractions of the crop size,
    tuned for detector-aligned square face crops.
    """

    ellipse_center: tuple[float, float] = (0.5, 0.52)
    ellipse_radii: tuple[float, float] = (0.36, 0.46)
    eye_boxes: tuple[tuple[float, float, float, float], ...] = (
        (0.22, 0.33, 0.45, 0.48),
        (0.55, 0.33, 0.78, 0.48),
    )
    mouth_box: tuple[float, float, float, float] = (0.32, 0.68, 0.68, 0.85)


DEFAULT_GEOMETRY = FaceGeometry()


@dataclass(frozen=True)
class SkinToneResult:
    image_id: str
    mean_rgb: tuple[float, float, float]
    mean_lab: tuple[float, float, float]
    ita_degrees: float
    label: SkinType
    skin_pixel_count: int
    filtered_out_count: int
    flags: tuple[str, ...] = ()

    @property
    def mean_rgb8(self) -> tuple[int, int, int]:
        return tuple(int(round(c)) for c in self.mean_rgb)


def skin_pixel_filter(cb, cr):
    """True where both chroma channels fall in the inclusive skin ranges.

    Luma is deliberately not constrained: it varies with lighting, not
    with skin color.
    """
    cb = np.asarray(cb, dtype=np.float64)
    cr = np.asarray(cr, dtype=np.float64)
    return (
        (CR_RANGE[0] <= cr) & (cr <= CR_RANGE[1])
        & (CB_RANGE[0] <= cb) & (cb <= CB_RANGE[1])
    )


def extract_skin_mask_fallback(
    face: np.ndarray, geometry: FaceGeometry = DEFAULT_GEOMETRY
) -> np.ndarray:
    """Geometric stand-in for a real face-skin segmenter.

    A central ellipse minus two eye boxes and a mouth box, all at fixed
    fractional coordinates; depends only on the crop dimensions.
    """
    h, w = np.asarray(face).shape[:2]
    yy, xx = np.mgrid[0:h, 0:w]
    # Pixel centers in fractional coordinates.
    fx = (xx + 0.5) / w
    fy = (yy + 0.5) / h
    cx, cy = geometry.ellipse_center
    rx, ry = geometry.ellipse_radii
    mask = ((fx - cx) / rx) ** 2 + ((fy - cy) / ry) ** 2 <= 1.0
    for left, top, right, bottom in (*geometry.eye_boxes, geometry.mouth_box):
        mask &= ~((fx >= left) & (fx < right) & (fy >= top) & (fy < bottom))
    return mask


def mean_skin_pixel(img: np.ndarray, skin: np.ndarray) -> tuple[float, float, float]:
    """Mean RGB over mask pixels that also pass the chroma skin filter.

    Returns the unquantized mean; raises NoSkinPixelsError when the
    filtered set is empty.
    """
    mean, count, _ = _filtered_mean(np.asarray(img), np.asarray(skin, dtype=bool))
    if count == 0:
        raise NoSkinPixelsError("no pixel passed the chroma skin filter")
    return tuple(mean)


def _filtered_mean(img: np.ndarray, skin: np.ndarray) -> tuple[np.ndarray, int, int]:
    candidates = img[skin].astype(np.float64)
    ycbcr = colorspace.rgb_to_ycbcr(candidates)
    keep = skin_pixel_filter(ycbcr[:, 1], ycbcr[:, 2])
    kept = candidates[keep]
    filtered_out = len(candidates) - len(kept)
    if len(kept) == 0:
        return np.zeros(3), 0, filtered_out
    return kept.mean(axis=0), len(kept), filtered_out


def rate_image(
    image_id: str,
    face: np.ndarray,
    skin_mask: np.ndarray | None = None,
    table: ItaRangeTable | None = None,
    min_skin_pixels: int = DEFAULT_MIN_SKIN_PIXELS,
    geometry: FaceGeometry = DEFAULT_GEOMETRY,
) -> SkinToneResult:
    """Rate one aligned face crop; deterministic for identical bytes."""
    if table is None:
        table = ItaRangeTable.standard()
    face = np.asarray(face)
    flags: list[str] = []
    if skin_mask is None:
        skin_mask = extract_skin_mask_fallback(face, geometry)
        flags.append("fallback_segmentation")
    mean, count, filtered_out = _filtered_mean(face, np.asarray(skin_mask, dtype=bool))
    if count == 0:
        raise NoSkinPixelsError(f"{image_id}: no pixel passed the chroma skin filter")
    if count < min_skin_pixels:
        flags.append("low_pixel_count")
    l, a, b = colorspace.rgb_to_lab(mean)
    if abs(b) < 1.0 and abs(l - 50.0) < 1.0:
        # Near-gray mean: the angle is numerically meaningless.
        flags.append("low_chroma")
    if b < 0:
        flags.append("negative_b")
    angle = float(colorspace.ita(l, b))
    return SkinToneResult(
        image_id=image_id,
        mean_rgb=tuple(mean),
        mean_lab=(float(l), float(a), float(b)),
        ita_degrees=angle,
        label=table.classify(angle),
        skin_pixel_count=count,
        filtered_out_count=filtered_out,
        flags=tuple(flags),
    )
