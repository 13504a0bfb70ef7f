"""Shared fixtures: synthetic images, masks, and manifests."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest

from skintone import imageio

# Flat skin color whose CIELab is approximately (60, 14, 20); passes the
# Cb/Cr skin filter and gives ITA near arctan(10/20) = 26.57 degrees.
SKIN_RGB = (180, 135, 110)
GRAY = (119, 119, 119)


def face_crop(size: int = 112, skin_rgb=SKIN_RGB, bg_rgb=GRAY) -> np.ndarray:
    """Square crop: uniform background with a centered skin-colored ellipse."""
    img = np.full((size, size, 3), bg_rgb, dtype=np.uint8)
    yy, xx = np.mgrid[0:size, 0:size]
    c = size / 2
    ellipse = ((xx - c) / (0.38 * size)) ** 2 + ((yy - c) / (0.46 * size)) ** 2 <= 1.0
    img[ellipse] = skin_rgb
    return img


def ellipse_mask(size: int = 112) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    c = size / 2
    return ((xx - c) / (0.38 * size)) ** 2 + ((yy - c) / (0.46 * size)) ** 2 <= 1.0


def write_manifest(path: Path, rows: list[dict]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["image_id", "face_path", "skin_mask_path", "bg_mask_path"]
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


@pytest.fixture
def synthetic_face_dir(tmp_path):
    """Three synthetic face crops with masks plus a manifest CSV."""
    rows = []
    for i, skin in enumerate([SKIN_RGB, (150, 110, 90), (100, 75, 60)]):
        image_id = f"img{i:03d}"
        img = face_crop(skin_rgb=skin)
        face_path = tmp_path / f"{image_id}.png"
        mask_path = tmp_path / f"{image_id}.skin.png"
        bg_path = tmp_path / f"{image_id}.bg.png"
        imageio.save_image(face_path, img)
        imageio.save_mask(mask_path, ellipse_mask())
        imageio.save_mask(bg_path, ~ellipse_mask())
        rows.append(
            {
                "image_id": image_id,
                "face_path": str(face_path),
                "skin_mask_path": str(mask_path),
                "bg_mask_path": str(bg_path),
            }
        )
    manifest = write_manifest(tmp_path / "manifest.csv", rows)
    return tmp_path, manifest, rows
