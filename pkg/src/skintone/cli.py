"""Batch command-line front end.

All commands share one manifest format: a CSV with columns image_id,
face_path and optional skin_mask_path / bg_mask_path.  Outputs use fixed
row ordering and fixed float formatting so re-runs are byte-identical.
"""

from __future__ import annotations

import csv
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import correction, imageio, ratings, skin
from .errors import SkinToneError

MANIFEST_COLUMNS = ("image_id", "face_path", "skin_mask_path", "bg_mask_path")


def read_manifest(path: str) -> list[dict[str, str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            fieldnames = reader.fieldnames or []
    except OSError as exc:
        raise click.UsageError(f"cannot read manifest: {exc}")
    if rows and not {"image_id", "face_path"} <= set(fieldnames):
        raise click.UsageError(f"manifest must have image_id and face_path columns, got {fieldnames}")
    return rows


def _load_optional_mask(row: dict[str, str], column: str, shape: tuple[int, int]):
    path = (row.get(column) or "").strip()
    if not path:
        return None
    return imageio.load_mask(path, expected_shape=shape)


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


@click.group()
def main():
    """Skin tone measurement toolkit."""


@main.command()
@click.option("--manifest", required=True, help="CSV of images to correct.")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Output directory; defaults to each image's own directory.")
@click.option("--tolerance", default=correction.DEFAULT_FLOOD_TOLERANCE, show_default=True,
              help="Per-channel flood-fill tolerance for the fallback background mask.")
def correct(manifest, out, tolerance):
    """Color-correct images against their 18%-gray background."""
    rows = read_manifest(manifest)
    out_dir = Path(out) if out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    factor_rows = []
    errors = 0
    for row in sorted(rows, key=lambda r: r["image_id"]):
        image_id = row["image_id"]
        try:
            img = imageio.load_image(row["face_path"])
            bg = _load_optional_mask(row, "bg_mask_path", img.shape[:2])
            corrected, factors, bg_count = correction.correct_image(img, bg, tolerance)
            src = Path(row["face_path"])
            dest = (out_dir or src.parent) / (src.stem + ".corrected.png")
            imageio.save_image(dest, corrected)
            factor_rows.append([
                image_id,
                f"{factors.r_const:.6f}", f"{factors.g_const:.6f}", f"{factors.b_const:.6f}",
                str(bg_count),
            ])
        except (OSError, SkinToneError) as exc:
            errors += 1
            click.echo(f"error: {image_id}: {exc}", err=True)
    if factor_rows or out_dir:
        factor_path = (out_dir or Path(manifest).parent) / "correction_factors.csv"
        _write_csv(factor_path, ["image_id", "r_const", "g_const", "b_const", "bg_pixel_count"],
                   factor_rows)
    click.echo(f"corrected {len(factor_rows)} image(s), {errors} error(s)")
    if errors:
        sys.exit(1)


def _rate_row(row, table, min_skin_pixels):
    image_id = row["image_id"]
    try:
        img = imageio.load_image(row["face_path"])
        mask = _load_optional_mask(row, "skin_mask_path", img.shape[:2])
        result = skin.rate_image(image_id, img, mask, table, min_skin_pixels)
        return [
            image_id,
            f"{result.ita_degrees:.2f}",
            str(result.label.ordinal),
            result.label.name,
            str(result.skin_pixel_count),
            ";".join(result.flags),
            "ok",
        ]
    except (OSError, SkinToneError) as exc:
        return [image_id, "", "", "", "", "", f"error: {exc}"]


@main.command("auto-rate")
@click.option("--manifest", required=True, help="CSV of aligned, color-corrected face crops.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--ita-table", default=None, help="JSON file with custom ITA boundaries.")
@click.option("--min-skin-pixels", default=skin.DEFAULT_MIN_SKIN_PIXELS, show_default=True)
@click.option("--threads", default=1, show_default=True)
def auto_rate(manifest, out, ita_table, min_skin_pixels, threads):
    """Run the automated ITA skin tone rating over a manifest."""
    rows = read_manifest(manifest)
    table = skin.ItaRangeTable.from_json(ita_table) if ita_table else skin.ItaRangeTable.standard()
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _rate_row(r, table, min_skin_pixels), rows))
    else:
        results = [_rate_row(r, table, min_skin_pixels) for r in rows]
    results.sort(key=lambda r: r[0])
    _write_csv(
        out_dir / "auto_ratings.csv",
        ["image_id", "ita_degrees", "label_ordinal", "label_name",
         "skin_pixel_count", "flags", "status"],
        results,
    )
    failures = sum(1 for r in results if r[-1] != "ok")
    click.echo(f"rated {len(results) - failures} image(s), {failures} failure(s)")


@main.command("consensus")
@click.option("--ratings", "ratings_path", required=True, help="JSONL rating log.")
@click.option("--variant", default="exemplar_corrected", show_default=True,
              type=click.Choice(ratings.TOOL_VARIANTS))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def consensus_cmd(ratings_path, variant, out):
    """Fuse three-rater Fitzpatrick ratings into per-image consensus labels."""
    records = ratings.load_ratings(ratings_path)
    results = ratings.consensus_for_variant(records, variant)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out_dir / "consensus.csv",
        ["image_id", "consensus_fst", "mode"],
        [[c.image_id, str(c.consensus_fst), c.mode] for c in results],
    )
    click.echo(f"consensus for {len(results)} image(s)")


@main.command("agreement")
@click.option("--ratings", "ratings_path", required=True, help="JSONL rating log.")
@click.option("--variant", default="exemplar_corrected", show_default=True,
              type=click.Choice(ratings.TOOL_VARIANTS))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def agreement_cmd(ratings_path, variant, out):
    """Pairwise inter-rater agreement matrices and summary."""
    records = [r for r in ratings.load_ratings(ratings_path) if r.tool_variant == variant]
    by_rater: dict[str, list[ratings.RatingRecord]] = {}
    for rec in records:
        by_rater.setdefault(rec.rater_id, []).append(rec)
    raters = sorted(by_rater)
    if len(raters) < 2:
        raise click.UsageError(f"need at least two raters for variant {variant!r}")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_lines = []
    for i, a in enumerate(raters):
        for b in raters[i + 1:]:
            matrix = ratings.agreement(by_rater[a], by_rater[b])
            _write_csv(
                out_dir / f"agreement_{a}_{b}.csv",
                [f"{a}\\{b}"] + [str(j) for j in range(1, 7)],
                [[str(row + 1)] + [str(int(c)) for c in matrix.counts[row]] for row in range(6)],
            )
            summary_lines.append(
                f"{a} vs {b}: n={matrix.total} exact={matrix.exact_pct:.1f}% "
                f"within-one={matrix.within_one_pct:.1f}% beyond-one={matrix.beyond_one_pct:.1f}%"
            )
    (out_dir / "agreement_summary.txt").write_text("\n".join(summary_lines) + "\n")
    click.echo("\n".join(summary_lines))


@main.command("compare")
@click.option("--consensus", "consensus_csv", required=True, help="consensus.csv from the consensus command.")
@click.option("--auto", "auto_csv", required=True, help="auto_ratings.csv from the auto-rate command.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def compare_cmd(consensus_csv, auto_csv, out):
    """Distribution of differences between manual consensus and automated labels."""
    with open(consensus_csv, newline="", encoding="utf-8") as fh:
        manual = {row["image_id"]: int(row["consensus_fst"]) for row in csv.DictReader(fh)}
    auto: dict[str, int] = {}
    failures: list[str] = []
    with open(auto_csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["status"] == "ok":
                auto[row["image_id"]] = int(row["label_ordinal"])
            else:
                failures.append(row["image_id"])
    dist = ratings.manual_vs_auto(manual, auto, failures)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out_dir / "compare.csv",
        ["difference", "count"],
        [[k, str(dist.counts[k])] for k in ("0", "1", "2", "3+")] + [["failures", str(dist.failures)]],
    )
    summary = (
        f"rated={dist.rated} failures={dist.failures}\n"
        f"exact={dist.exact_pct:.1f}% within-one={dist.within_one_pct:.1f}%\n"
    )
    (out_dir / "compare_summary.txt").write_text(summary)
    click.echo(summary, nl=False)


@main.command("report")
@click.option("--ratings", "ratings_path", required=True, help="JSONL rating log.")
@click.option("--variant", default="exemplar_corrected", show_default=True,
              type=click.Choice(ratings.TOOL_VARIANTS))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def report_cmd(ratings_path, variant, out):
    """Plain-text summary: rater distributions, consensus split, agreement."""
    records = [r for r in ratings.load_ratings(ratings_path) if r.tool_variant == variant]
    if not records:
        raise click.UsageError(f"no records for variant {variant!r}")
    lines = [f"variant: {variant}", ""]
    lines.append("rating distributions (1..6):")
    for rater, hist in sorted(ratings.agreement_distribution(records).items()):
        lines.append(f"  {rater}: {hist}")
    results = ratings.consensus_for_variant(records, variant)
    if results:
        n = len(results)
        split = {m: sum(1 for c in results if c.mode == m) for m in ("unanimous", "majority", "median")}
        lines.append("")
        lines.append(f"consensus over {n} image(s):")
        for mode, count in split.items():
            lines.append(f"  {mode}: {count} ({100.0 * count / n:.1f}%)")
    by_rater: dict[str, list[ratings.RatingRecord]] = {}
    for rec in records:
        by_rater.setdefault(rec.rater_id, []).append(rec)
    raters = sorted(by_rater)
    if len(raters) >= 2:
        lines.append("")
        lines.append("pairwise agreement:")
        for i, a in enumerate(raters):
            for b in raters[i + 1:]:
                m = ratings.agreement(by_rater[a], by_rater[b])
                lines.append(
                    f"  {a} vs {b}: exact={m.exact_pct:.1f}% within-one={m.within_one_pct:.1f}%"
                )
    text = "\n".join(lines) + "\n"
    Path(out).write_text(text)
    click.echo(text, nl=False)


@main.command("serve")
@click.option("--images-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--corrected-dir", default=None, type=click.Path(file_okay=False),
              help="Directory of .corrected.png variants for ?corrected=true serving.")
@click.option("--exemplars", default=None, help="CSV mapping label 1..6 to exemplar image paths.")
@click.option("--log", "log_path", required=True, help="Append-only JSONL rating log.")
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False),
              help="Built rating UI bundle to host at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(images_dir, corrected_dir, exemplars, log_path, ui_dir, host, port):
    """Run the exemplar-guided manual rating service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        images_dir=Path(images_dir),
        corrected_dir=Path(corrected_dir) if corrected_dir else None,
        exemplars_csv=Path(exemplars) if exemplars else None,
        log_path=Path(log_path),
        ui_dir=Path(ui_dir) if ui_dir else None,
    )
    uvicorn.run(create_app(config), host=host, port=port)


if __name__ == "__main__":
    main()
