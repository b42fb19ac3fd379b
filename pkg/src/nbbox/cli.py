"""Command-line front end: augment, eval, analyze, sweep.

Reproducibility model: one root seed (``--seed``, falling back to the
``NBBOX_SEED`` environment variable, then 0) and per-file substreams
labelled ``{image_id}||{epoch_tag}``, so results are independent of worker
count and processing order, and a training loop can vary ``--epoch-tag``
to get fresh noise per epoch without giving up replay.

Augment processes files in a bounded thread pool with per-file error
isolation: a bad file is reported and skipped, the rest still run, and the
exit status is nonzero iff anything failed. Output files are written via
temp-file-plus-rename so readers never observe a half-written file.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import click

from .analysis import discrepancy_report, noise_sweep
from .annotations import read_dota_annotations, read_dota_detections, write_dota_annotations
from .config import NoiseConfig, default_config, load_config, parse_config_text
from .errors import NbboxError
from .evaluation import evaluate
from .rng import RngStream
from .transform import nbbox_apply

_MODE_NAMES = {"11pt": "eleven_point", "all": "all_point"}


def _resolve_config(config_path) -> NoiseConfig:
    if config_path is None:
        return default_config()
    return load_config(config_path)


@click.group()
def main():
    """Label-noise tooling for oriented-box datasets (DOTA text format)."""


def _augment_one(path: Path, out_dir: Path, cfg: NoiseConfig, root: RngStream, epoch_tag: str, clip):
    text = path.read_bytes()
    f = read_dota_annotations(text, path.stem)
    stream = root.substream(f"{f.image_id}||{epoch_tag}")
    records = [slot.record for slot in f.records]
    noisy = nbbox_apply(records, cfg, stream)
    if clip is not None:
        w_img, h_img = clip
        noisy = [
            replace(
                r,
                box=replace(
                    r.box,
                    x_c=min(max(r.box.x_c, 0.0), w_img),
                    y_c=min(max(r.box.y_c, 0.0), h_img),
                ),
            )
            for r in noisy
        ]
    out_bytes = write_dota_annotations(f.with_records(noisy))
    out_path = out_dir / path.name
    tmp = out_dir / f".tmp-{path.name}"
    tmp.write_bytes(out_bytes)
    os.replace(tmp, out_path)
    gated = sum(1 for r in records if r.box.w <= cfg.gamma or r.box.h <= cfg.gamma)
    return len(records), gated


@main.command()
@click.option("--ann-dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--seed", type=int, envvar="NBBOX_SEED", default=0, show_default=True)
@click.option("--epoch-tag", default="", help="Folded into each file's stream label; vary per epoch.")
@click.option("--clip", nargs=2, type=float, default=None, help="Clamp box centers into [0,W]x[0,H].")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker threads.")
def augment(ann_dir: Path, out_dir: Path, config_path, seed: int, epoch_tag: str, clip, jobs: int):
    """Write a noised copy of every .txt annotation file in --ann-dir."""
    cfg = _resolve_config(config_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    root = RngStream(seed)
    files = sorted(ann_dir.glob("*.txt"))
    errors = 0
    total_records = 0
    total_gated = 0
    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        futures = [
            pool.submit(_augment_one, p, out_dir, cfg, root, epoch_tag, clip) for p in files
        ]
        for path, fut in zip(files, futures):
            try:
                n, gated = fut.result()
            except (NbboxError, OSError) as exc:
                click.echo(f"error: {path}: {exc}", err=True)
                errors += 1
            else:
                total_records += n
                total_gated += gated
    click.echo(f"{len(files) - errors} files, {total_records} records, {total_gated} gated")
    if errors:
        sys.exit(1)


def _read_ann_dir(ann_dir: Path):
    gts = {}
    files = []
    for p in sorted(ann_dir.glob("*.txt")):
        f = read_dota_annotations(p.read_bytes(), p.stem)
        files.append(f)
        gts[f.image_id] = [slot.record for slot in f.records]
    return files, gts


@main.command(name="eval")
@click.option("--ann-dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--det-dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--iou", type=float, default=0.5, show_default=True)
@click.option("--mode", type=click.Choice(sorted(_MODE_NAMES)), default="11pt", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the report as one JSON object.")
def eval_cmd(ann_dir: Path, det_dir: Path, iou: float, mode: str, as_json: bool):
    """Score per-class detection files against ground truth."""
    try:
        _, gts = _read_ann_dir(ann_dir)
        streams = {p.stem: p.read_bytes() for p in sorted(det_dir.glob("*.txt"))}
        dets = read_dota_detections(streams)
        report = evaluate(dets, gts, iou_threshold=iou, mode=_MODE_NAMES[mode])
    except NbboxError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if as_json:
        payload = {
            "iou_threshold": report.iou_threshold,
            "mode": report.mode,
            "map_score": report.map_score,
            "per_class": {
                c: {"ap": r.ap, "num_gt": r.num_gt, "num_det": r.num_det}
                for c, r in report.per_class.items()
            },
        }
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(f"{'category':<24}{'AP':>8}{'num_gt':>8}{'num_det':>9}")
        for c, r in report.per_class.items():
            click.echo(f"{c:<24}{r.ap:>8.4f}{r.num_gt:>8}{r.num_det:>9}")
        click.echo(f"mAP@{report.iou_threshold:.2f} ({report.mode}): {report.map_score:.4f}")


@main.command()
@click.option("--ann-dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), default=Path("report.json"), show_default=True)
def analyze(ann_dir: Path, out_path: Path):
    """Report annotation-vs-minimum-rectangle discrepancy for a dataset."""
    try:
        files, _ = _read_ann_dir(ann_dir)
        stats = discrepancy_report(files)
    except NbboxError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    payload = {
        "mean_iou": stats.mean_iou,
        "histogram": list(stats.histogram),
        "per_record": [
            {
                "image_id": r.image_id,
                "category": r.category,
                "iou_ann_vs_minrect": r.iou_ann_vs_minrect,
                "area_ratio": r.area_ratio,
                "flagged": r.flagged,
            }
            for r in stats.per_record
        ],
    }
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(f"{len(stats.per_record)} records, mean_iou {stats.mean_iou:.4f} -> {out_path}")


def _parse_grid(text: str, source: str) -> list[NoiseConfig]:
    """Grid file: blocks of flat key=value overrides separated by blank
    lines; each block yields one config on top of the defaults."""
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    configs = []
    for i, block in enumerate(b for b in blocks if b):
        configs.append(parse_config_text("\n".join(block), source=f"{source}[block {i}]"))
    return configs


@main.command()
@click.option("--ann-dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--grid", "grid_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--seed", type=int, envvar="NBBOX_SEED", default=0, show_default=True)
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), default=Path("sweep.csv"), show_default=True)
def sweep(ann_dir: Path, grid_path: Path, seed: int, trials: int, out_path: Path):
    """Run the self-IoU degradation sweep over a config grid."""
    try:
        files, _ = _read_ann_dir(ann_dir)
        grid = _parse_grid(grid_path.read_text(encoding="utf-8"), str(grid_path))
        if not grid:
            raise click.ClickException(f"{grid_path}: no config blocks")
        result = noise_sweep(files, grid, seed=seed, trials=trials)
    except NbboxError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    cfg_fields = [
        "scale_enabled", "s_min", "s_max", "isotropic_scale",
        "rotate_enabled", "r_min", "r_max",
        "translate_enabled", "t_min", "t_max", "isotropic_translate",
        "gamma",
    ]
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cfg_fields + ["mean_self_iou", "p05_self_iou", "frac_gated"])
        for row in result.grid:
            writer.writerow(
                [getattr(row.config, name) for name in cfg_fields]
                + [row.mean_self_iou, row.p05_self_iou, row.frac_gated]
            )
    click.echo(f"{len(result.grid)} configs, seed {result.seed} -> {out_path}")


if __name__ == "__main__":
    main()
