"""PNG loading and saving for images and binary masks.

Mask contract: grayscale PNG, 0 = unselected, 255 = selected, same
dimensions as the companion image.  Any other pixel value is rejected.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DimensionMismatchError, MaskFormatError


def load_image(path: str | Path) -> np.ndarray:
    """Load an image as an (H, W, 3) uint8 RGB array."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"))


def save_image(path: str | Path, img: np.ndarray) -> None:
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="RGB").save(path)


def load_mask(path: str | Path, expected_shape: tuple[int, int] | None = None) -> np.ndarray:
    """Load a 0/255 grayscale PNG as an (H, W) bool array."""
    with Image.open(path) as im:
        if im.mode != "L":
            im = im.convert("L")
        raw = np.asarray(im)
    values = np.unique(raw)
    if not np.all(np.isin(values, (0, 255))):
        raise MaskFormatError(f"{path}: mask pixels must be 0 or 255, found {values[:8]}")
    if expected_shape is not None and raw.shape != expected_shape:
        raise DimensionMismatchError(
            f"{path}: mask is {raw.shape}, image is {expected_shape}"
        )
    return raw == 255


def save_mask(path: str | Path, mask: np.ndarray) -> None:
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(path)
