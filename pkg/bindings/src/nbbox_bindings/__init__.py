"""Array-batch front door to the oriented-box noise library.

Training pipelines mostly hold boxes as an (N, 5) float array of
(x_c, y_c, w, h, theta-in-degrees) rows, not as dataclass lists. This
package converts at the boundary and delegates everything else:

* ``apply`` noises a batch through the core transform, bit-identical to
  calling the core directly (and to the CLI for the same seed and stream
  label).
* ``iou`` scores two 5-vectors with the core's polygon-clipping IoU.
* ``evaluate`` runs the core matcher/AP pipeline on plain tuples and
  returns a plain dict, JSON-ready.

Config travels as a plain mapping so experiment-config systems can splice
it; key and value validation stays in the core (unknown keys raise
TypeError, bad values the core's ConfigError). Angles are degrees only.
All functions are pure: no module state, so concurrent calls and repeated
sessions agree by construction.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from nbbox import (
    AnnotationRecord,
    NoiseConfig,
    OrientedBox,
    RngStream,
    detection_from_box,
    evaluate as _core_evaluate,
    nbbox_apply,
    rotated_iou,
)

__all__ = ["apply", "iou", "evaluate"]

__version__ = "0.1.0"


def _as_batch(boxes) -> np.ndarray:
    arr = np.asarray(boxes, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 5:
        raise ValueError(f"batch must have shape (N, 5), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("batch contains non-finite values")
    if (arr[:, 2] <= 0).any() or (arr[:, 3] <= 0).any():
        raise ValueError("batch widths and heights must be > 0")
    return arr


def _as_box(vec, name: str) -> OrientedBox:
    arr = np.asarray(vec, dtype=np.float64)
    if arr.shape != (5,):
        raise ValueError(f"{name} must be a 5-vector, got shape {arr.shape}")
    return OrientedBox(*map(float, arr))


def apply(
    boxes,
    config: Mapping | None = None,
    seed: int = 0,
    label: str = "",
    categories: Sequence[str] | None = None,
) -> np.ndarray:
    """Noise an (N, 5) batch; returns a new (N, 5) float64 array.

    ``config`` maps NoiseConfig field names to values (missing keys keep
    the defaults). ``label`` selects the substream exactly like the CLI's
    per-file label, so ``apply(b, cfg, seed, f"{image_id}||{tag}")``
    reproduces the file pipeline bit for bit. ``categories`` is accepted
    for call-site symmetry; it does not influence the transform.
    """
    arr = _as_batch(boxes)
    cfg = NoiseConfig(**dict(config or {}))
    if categories is not None and len(categories) != arr.shape[0]:
        raise ValueError(
            f"categories length {len(categories)} != batch length {arr.shape[0]}"
        )
    recs = [
        AnnotationRecord(
            OrientedBox(*map(float, row)),
            categories[i] if categories is not None else "obj",
            0,
        )
        for i, row in enumerate(arr)
    ]
    stream = RngStream(seed).substream(label)
    out = nbbox_apply(recs, cfg, stream)
    result = np.empty_like(arr)
    for i, rec in enumerate(out):
        b = rec.box
        result[i] = (b.x_c, b.y_c, b.w, b.h, b.theta)
    return result


def iou(a, b) -> float:
    """Rotated IoU of two (x_c, y_c, w, h, theta) 5-vectors."""
    return rotated_iou(_as_box(a, "a"), _as_box(b, "b"))


def evaluate(dets, gts, iou_threshold: float = 0.5, mode: str = "eleven_point") -> dict:
    """Score detections against ground truth; plain-dict report.

    ``dets``: iterable of (image_id, category, score, 5-vector).
    ``gts``: mapping image_id -> iterable of (category, difficulty,
    5-vector). Returns {"map_score", "iou_threshold", "mode",
    "per_class": {category: {"ap", "num_gt", "num_det"}}}.
    """
    det_records = [
        detection_from_box(img, float(score), _as_box(vec, "detection box"), cat)
        for img, cat, score, vec in dets
    ]
    gt_map = {
        img: [
            AnnotationRecord(_as_box(vec, "ground-truth box"), cat, int(diff))
            for cat, diff, vec in recs
        ]
        for img, recs in gts.items()
    }
    report = _core_evaluate(det_records, gt_map, iou_threshold=iou_threshold, mode=mode)
    return {
        "map_score": report.map_score,
        "iou_threshold": report.iou_threshold,
        "mode": report.mode,
        "per_class": {
            cat: {"ap": r.ap, "num_gt": r.num_gt, "num_det": r.num_det}
            for cat, r in report.per_class.items()
        },
    }
