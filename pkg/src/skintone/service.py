"""HTTP backend for the exemplar-guided manual rating tool.

Serves the images under review and the six exemplar faces, hands each
rater their own stable image sequence, and persists ratings to an
append-only JSONL log.  A rating is acknowledged only after its log line
is flushed and fsynced, so an acknowledged rating survives a crash.
"""

from __future__ import annotations

import csv
import hashlib
import os
import random
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import InvalidRatingError
from .ratings import TOOL_VARIANTS, RatingRecord, load_ratings
from .skin import SKIN_TYPE_NAMES

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass
class ServiceConfig:
    images_dir: Path
    log_path: Path
    corrected_dir: Path | None = None
    exemplars_csv: Path | None = None
    ui_dir: Path | None = None
    raters: tuple[str, ...] | None = None  # None = any non-empty rater id


class RatingSubmission(BaseModel):
    image_id: str
    rater_id: str = Field(min_length=1)
    fst: int
    tool_variant: str
    timestamp: str | None = None


class RatingLog:
    """Append-only JSONL log with serialized, durable writes."""

    def __init__(self, path: Path):
        self.path = path
        self._lock = threading.Lock()
        self._rated: set[tuple[str, str, str]] = set()
        if path.exists():
            for rec in load_ratings(path):
                self._rated.add((rec.image_id, rec.rater_id, rec.tool_variant))

    def append(self, record: RatingRecord) -> None:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._rated.add((record.image_id, record.rater_id, record.tool_variant))

    def has_rating(self, image_id: str, rater_id: str, variant: str) -> bool:
        return (image_id, rater_id, variant) in self._rated

    def export(self, variant: str | None) -> str:
        with self._lock:
            if not self.path.exists():
                return ""
            lines = self.path.read_text(encoding="utf-8").splitlines()
        if variant:
            lines = [ln for ln in lines if RatingRecord.from_json(ln).tool_variant == variant]
        return "".join(ln + "\n" for ln in lines)


def discover_images(images_dir: Path) -> dict[str, Path]:
    """Map image_id (file stem) to file path for the rating set."""
    images = {}
    for path in sorted(images_dir.iterdir()):
        if path.suffix.lower() in IMAGE_SUFFIXES and not path.name.endswith(".corrected.png"):
            images[path.stem] = path
    return images


def load_exemplars(csv_path: Path) -> dict[int, Path]:
    """CSV with columns label (1..6) and path; exactly one row per label."""
    exemplars: dict[int, Path] = {}
    with open(csv_path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            label = int(row["label"])
            if label not in range(1, 7) or label in exemplars:
                raise ValueError(f"exemplar manifest needs exactly one row per label 1..6")
            exemplars[label] = Path(row["path"])
    if len(exemplars) != 6:
        raise ValueError(f"exemplar manifest has {len(exemplars)} labels, expected 6")
    return exemplars


def rater_queue(image_ids: list[str], rater_id: str) -> list[str]:
    """Stable per-rater ordering: a shuffle seeded by the rater id."""
    seed = int.from_bytes(hashlib.sha256(rater_id.encode()).digest()[:8], "big")
    queue = sorted(image_ids)
    random.Random(seed).shuffle(queue)
    return queue


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="skin tone rating service")
    images = discover_images(config.images_dir)
    exemplars = load_exemplars(config.exemplars_csv) if config.exemplars_csv else {}
    log = RatingLog(config.log_path)

    def check_rater(rater: str) -> None:
        if not rater:
            raise HTTPException(422, "rater id must be non-empty")
        if config.raters is not None and rater not in config.raters:
            raise HTTPException(403, f"unknown rater {rater!r}")

    @app.get("/api/next")
    def next_image(rater: str = Query(...), variant: str = Query("exemplar_corrected")):
        check_rater(rater)
        if variant not in TOOL_VARIANTS:
            raise HTTPException(422, f"unknown variant {variant!r}")
        queue = rater_queue(list(images), rater)
        total = len(queue)
        done_count = sum(1 for i in queue if log.has_rating(i, rater, variant))
        for image_id in queue:
            if not log.has_rating(image_id, rater, variant):
                corrected = variant == "exemplar_corrected" and config.corrected_dir is not None
                url = f"/api/images/{image_id}" + ("?corrected=true" if corrected else "")
                return {"image_id": image_id, "url": url, "rated": done_count, "total": total}
        return {"done": True, "rated": done_count, "total": total}

    @app.get("/api/images/{image_id}")
    def get_image(image_id: str, corrected: bool = False):
        path = images.get(image_id)
        if path is None:
            raise HTTPException(404, f"unknown image {image_id!r}")
        if corrected:
            if config.corrected_dir is None:
                raise HTTPException(404, "no corrected images configured")
            path = config.corrected_dir / (path.stem + ".corrected.png")
            if not path.exists():
                raise HTTPException(404, f"no corrected variant for {image_id!r}")
        return FileResponse(path)

    @app.get("/api/exemplars")
    def get_exemplars():
        return [
            {"label": label, "name": SKIN_TYPE_NAMES[label - 1], "url": f"/api/exemplars/{label}"}
            for label in sorted(exemplars)
        ]

    @app.get("/api/exemplars/{label}")
    def get_exemplar_image(label: int):
        path = exemplars.get(label)
        if path is None:
            raise HTTPException(404, f"no exemplar for label {label}")
        return FileResponse(path)

    @app.post("/api/ratings")
    def submit_rating(submission: RatingSubmission):
        check_rater(submission.rater_id)
        if submission.image_id not in images:
            raise HTTPException(404, f"unknown image {submission.image_id!r}")
        timestamp = submission.timestamp or datetime.now(timezone.utc).isoformat()
        try:
            record = RatingRecord(
                submission.image_id, submission.rater_id, submission.fst,
                submission.tool_variant, timestamp,
            )
        except InvalidRatingError as exc:
            raise HTTPException(400, str(exc))
        log.append(record)
        return {"ok": True, "image_id": record.image_id}

    @app.get("/api/export", response_class=PlainTextResponse)
    def export(variant: str | None = None):
        return log.export(variant)

    if config.ui_dir is not None:
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
