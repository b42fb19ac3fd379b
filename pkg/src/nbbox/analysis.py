"""Detector-free analyses.

Two reports that need only annotation files:

* ``discrepancy_report`` quantifies how far each annotated quadrilateral is
  from the minimum-area rectangle of its own corners (IoU and area ratio),
  with a histogram over the dataset. Real datasets are full of slightly
  loose or skewed quads; this makes the slack visible.
* ``noise_sweep`` measures label degradation directly: for each noise
  config in a grid, the rotated IoU between each box and its noised self,
  aggregated over seeded trials. It is a proxy for detector sensitivity
  that runs in milliseconds instead of GPU-days.

A simple quadrilateral always lies inside the minimum-area rectangle of its
corners, so its IoU with that rectangle reduces to area(quad)/area(rect);
degenerate (zero-area) and self-intersecting quads are flagged and scored
IoU 0 rather than dropped.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .annotations import AnnotationFile
from .config import NoiseConfig
from .errors import InvalidInputError
from .geometry import EPS_GEOM, rotated_iou
from .rng import RngStream
from .transform import nbbox_apply

__all__ = [
    "RecordDiscrepancy",
    "DiscrepancyStats",
    "SweepRow",
    "SweepResult",
    "discrepancy_report",
    "noise_sweep",
    "config_summary",
]

HISTOGRAM_BUCKETS = 20  # IoU in [0,1], width 0.05


@dataclass(frozen=True)
class RecordDiscrepancy:
    """Per-record annotation-vs-minimum-rectangle comparison.

    ``flagged`` marks degenerate or self-intersecting quads; their iou is
    0.0 and (for zero-area quads) area_ratio is reported as 1.0 since the
    quotient is undefined.
    """

    image_id: str
    category: str
    iou_ann_vs_minrect: float
    area_ratio: float
    flagged: bool = False


@dataclass(frozen=True)
class DiscrepancyStats:
    per_record: tuple[RecordDiscrepancy, ...]
    histogram: tuple[int, ...]
    mean_iou: float


@dataclass(frozen=True)
class SweepRow:
    config: NoiseConfig
    config_summary: str
    mean_self_iou: float
    p05_self_iou: float
    frac_gated: float


@dataclass(frozen=True)
class SweepResult:
    grid: tuple[SweepRow, ...]
    seed: int


def _shoelace_signed(quad) -> float:
    s = 0.0
    for i in range(4):
        x0, y0 = quad[2 * i], quad[2 * i + 1]
        j = (i + 1) % 4
        x1, y1 = quad[2 * j], quad[2 * j + 1]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _self_intersects(quad) -> bool:
    """True for bowtie quads: either pair of opposite edges properly
    crosses."""
    pts = [(quad[2 * i], quad[2 * i + 1]) for i in range(4)]

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def crosses(a, b, c, d):
        return (
            orient(a, b, c) * orient(a, b, d) < 0
            and orient(c, d, a) * orient(c, d, b) < 0
        )

    return crosses(pts[0], pts[1], pts[2], pts[3]) or crosses(pts[1], pts[2], pts[3], pts[0])


def discrepancy_report(files: list[AnnotationFile]) -> DiscrepancyStats:
    """Compare every annotated quad against the minimum rectangle of its
    corners. Needs at least one record across the input files."""
    per_record: list[RecordDiscrepancy] = []
    histogram = [0] * HISTOGRAM_BUCKETS
    total_iou = 0.0
    for f in files:
        for slot in f.records:
            quad_area = abs(_shoelace_signed(slot.quad))
            rect_area = slot.record.box.area  # the parsed box IS the min-rect
            if quad_area <= EPS_GEOM:
                entry = RecordDiscrepancy(f.image_id, slot.record.category, 0.0, 1.0, flagged=True)
            elif _self_intersects(slot.quad):
                ratio = max(rect_area / quad_area, 1.0)
                entry = RecordDiscrepancy(f.image_id, slot.record.category, 0.0, ratio, flagged=True)
            else:
                iou = min(quad_area / rect_area, 1.0)
                ratio = rect_area / quad_area
                if ratio < 1.0:
                    warnings.warn(
                        f"area ratio {ratio} below 1 for a quad in {f.image_id}; clamping"
                    )
                    ratio = 1.0
                entry = RecordDiscrepancy(f.image_id, slot.record.category, iou, ratio)
            per_record.append(entry)
            idx = min(int(entry.iou_ann_vs_minrect / 0.05), HISTOGRAM_BUCKETS - 1)
            histogram[idx] += 1
            total_iou += entry.iou_ann_vs_minrect
    if not per_record:
        raise InvalidInputError("discrepancy_report needs at least one record")
    return DiscrepancyStats(
        per_record=tuple(per_record),
        histogram=tuple(histogram),
        mean_iou=total_iou / len(per_record),
    )


def config_summary(cfg: NoiseConfig) -> str:
    """Compact one-line rendering of a config for tables and CSV."""
    parts = []
    if cfg.scale_enabled:
        parts.append(f"s[{cfg.s_min},{cfg.s_max}]{'iso' if cfg.isotropic_scale else 'aniso'}")
    else:
        parts.append("s=off")
    parts.append(f"r[{cfg.r_min},{cfg.r_max}]" if cfg.rotate_enabled else "r=off")
    if cfg.translate_enabled:
        parts.append(f"t[{cfg.t_min},{cfg.t_max}]{'iso' if cfg.isotropic_translate else 'aniso'}")
    else:
        parts.append("t=off")
    parts.append(f"gamma={cfg.gamma}")
    return " ".join(parts)


def noise_sweep(
    files: list[AnnotationFile],
    grid: list[NoiseConfig],
    seed: int,
    trials: int = 1,
) -> SweepResult:
    """Self-IoU degradation for each config in ``grid``.

    Each (file, config, trial) triple gets its own substream, so results do
    not depend on iteration order. Gated records (original w or h <= gamma)
    are excluded from the IoU statistics and counted in frac_gated instead;
    a config whose gate swallows everything reports mean and p05 of 1.0.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    root = RngStream(seed)
    rows: list[SweepRow] = []
    for ci, cfg in enumerate(grid):
        ious: list[float] = []
        gated = 0
        total = 0
        for f in files:
            records = [slot.record for slot in f.records]
            total += len(records)
            gated += sum(1 for r in records if min(r.box.w, r.box.h) <= cfg.gamma)
            for k in range(trials):
                stream = root.substream(f"{f.image_id}|cfg{ci}|trial{k}")
                noisy = nbbox_apply(records, cfg, stream)
                for orig, new in zip(records, noisy):
                    if min(orig.box.w, orig.box.h) <= cfg.gamma:
                        continue
                    ious.append(rotated_iou(new.box, orig.box))
        if ious:
            arr = np.asarray(ious)
            mean = float(arr.mean())
            p05 = float(np.percentile(arr, 5.0))
        else:
            mean = p05 = 1.0
        frac = gated / total if total else 0.0
        rows.append(
            SweepRow(
                config=cfg,
                config_summary=config_summary(cfg),
                mean_self_iou=mean,
                p05_self_iou=p05,
                frac_gated=frac,
            )
        )
    return SweepResult(grid=tuple(rows), seed=seed)
