"""Manual-rating data model and agreement statistics.

Covers three analyses over Fitzpatrick ratings: fusing three raters into
a consensus label, pairwise inter-rater agreement matrices, and the
distribution of differences between manual consensus and automated
labels.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidRatingError, NoOverlapError

TOOL_VARIANTS = ("baseline", "exemplar", "exemplar_corrected")


@dataclass(frozen=True)
class RatingRecord:
    image_id: str
    rater_id: str
    fst: int
    tool_variant: str
    timestamp: str

    def __post_init__(self):
        if self.fst not in range(1, 7):
            raise InvalidRatingError(f"fst must be 1..6, got {self.fst}")
        if self.tool_variant not in TOOL_VARIANTS:
            raise InvalidRatingError(f"unknown tool_variant {self.tool_variant!r}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "image_id": self.image_id,
                "rater_id": self.rater_id,
                "fst": self.fst,
                "tool_variant": self.tool_variant,
                "timestamp": self.timestamp,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "RatingRecord":
        d = json.loads(line)
        return cls(d["image_id"], d["rater_id"], int(d["fst"]), d["tool_variant"], d["timestamp"])


def load_ratings(path: str | Path) -> list[RatingRecord]:
    """Read a JSON-lines rating log, one record per line."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(RatingRecord.from_json(line))
    return records


def save_ratings(path: str | Path, records: Iterable[RatingRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def latest_ratings(records: Iterable[RatingRecord]) -> list[RatingRecord]:
    """Collapse re-rated images to the latest record.

    Keyed by (image, rater, variant); the record with the greatest
    timestamp wins, with later log position breaking ties.  Earlier
    records stay in the log but are excluded from statistics.
    """
    best: dict[tuple[str, str, str], RatingRecord] = {}
    for rec in records:
        key = (rec.image_id, rec.rater_id, rec.tool_variant)
        prev = best.get(key)
        if prev is None or rec.timestamp >= prev.timestamp:
            best[key] = rec
    return list(best.values())


@dataclass(frozen=True)
class ConsensusResult:
    image_id: str
    consensus_fst: int
    mode: str  # unanimous | majority | median


def consensus(r1: int, r2: int, r3: int, image_id: str = "") -> ConsensusResult:
    """Fuse three ratings: agreement of two or three wins, else the median.

    All three outcomes reduce to the middle of the sorted triple; the
    mode records which case applied.  Invariant under input permutation.
    """
    for v in (r1, r2, r3):
        if v not in range(1, 7):
            raise InvalidRatingError(f"rating must be 1..6, got {v}")
    ordered = sorted((r1, r2, r3))
    if ordered[0] == ordered[2]:
        mode = "unanimous"
    elif ordered[0] == ordered[1] or ordered[1] == ordered[2]:
        mode = "majority"
    else:
        mode = "median"
    return ConsensusResult(image_id, ordered[1], mode)


def consensus_for_variant(records: Iterable[RatingRecord], variant: str) -> list[ConsensusResult]:
    """Consensus per image over a variant's latest ratings.

    Images without exactly three ratings are skipped with a warning; the
    fusion rule is defined for three raters only.
    """
    by_image: dict[str, list[RatingRecord]] = {}
    for rec in latest_ratings(records):
        if rec.tool_variant == variant:
            by_image.setdefault(rec.image_id, []).append(rec)
    results = []
    for image_id in sorted(by_image):
        recs = by_image[image_id]
        if len(recs) != 3:
            warnings.warn(
                f"{image_id}: {len(recs)} rating(s), consensus needs exactly 3; skipped",
                stacklevel=2,
            )
            continue
        results.append(consensus(recs[0].fst, recs[1].fst, recs[2].fst, image_id))
    return results


@dataclass(frozen=True)
class AgreementMatrix:
    """6x6 co-rating counts for one rater pair; cell (i, j) counts images
    rated i+1 by A and j+1 by B."""

    rater_a: str
    rater_b: str
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def exact_pct(self) -> float:
        return 100.0 * np.trace(self.counts) / self.total

    @property
    def within_one_pct(self) -> float:
        i, j = np.indices((6, 6))
        return 100.0 * self.counts[np.abs(i - j) <= 1].sum() / self.total

    @property
    def beyond_one_pct(self) -> float:
        i, j = np.indices((6, 6))
        return 100.0 * self.counts[np.abs(i - j) > 1].sum() / self.total


def agreement(
    ratings_a: Iterable[RatingRecord], ratings_b: Iterable[RatingRecord]
) -> AgreementMatrix:
    """Pairwise agreement over the images both raters rated."""
    a_list = latest_ratings(ratings_a)
    b_list = latest_ratings(ratings_b)
    a_by_image = {r.image_id: r for r in a_list}
    b_by_image = {r.image_id: r for r in b_list}
    shared = a_by_image.keys() & b_by_image.keys()
    if not shared:
        raise NoOverlapError("raters share no co-rated images")
    counts = np.zeros((6, 6), dtype=np.int64)
    for image_id in shared:
        counts[a_by_image[image_id].fst - 1, b_by_image[image_id].fst - 1] += 1
    rater_a = a_list[0].rater_id if a_list else ""
    rater_b = b_list[0].rater_id if b_list else ""
    return AgreementMatrix(rater_a, rater_b, counts)


def agreement_distribution(records: Iterable[RatingRecord]) -> dict[str, list[int]]:
    """Per-rater histogram of ratings 1..6 over the latest records."""
    hists: dict[str, list[int]] = {}
    for rec in latest_ratings(records):
        hists.setdefault(rec.rater_id, [0] * 6)[rec.fst - 1] += 1
    return hists


@dataclass(frozen=True)
class DiffDistribution:
    """Histogram of |manual consensus - automated label| plus pipeline
    failures, which are excluded from the percentages."""

    counts: dict[str, int] = field(default_factory=lambda: {"0": 0, "1": 0, "2": 0, "3+": 0})
    failures: int = 0

    @property
    def rated(self) -> int:
        return sum(self.counts.values())

    @property
    def within_one_pct(self) -> float:
        return 100.0 * (self.counts["0"] + self.counts["1"]) / self.rated

    @property
    def exact_pct(self) -> float:
        return 100.0 * self.counts["0"] / self.rated


def manual_vs_auto(
    consensus_by_image: Mapping[str, int],
    auto_by_image: Mapping[str, int],
    failures: Iterable[str] = (),
) -> DiffDistribution:
    """Difference distribution over images with both a consensus and an
    automated label; ``failures`` lists image ids the pipeline could not
    rate."""
    counts = {"0": 0, "1": 0, "2": 0, "3+": 0}
    failure_set = set(failures)
    for image_id, manual in consensus_by_image.items():
        if image_id in failure_set or image_id not in auto_by_image:
            continue
        diff = abs(manual - auto_by_image[image_id])
        counts[str(diff) if diff < 3 else "3+"] += 1
    n_failures = len(failure_set & consensus_by_image.keys())
    return DiffDistribution(counts, n_failures)
