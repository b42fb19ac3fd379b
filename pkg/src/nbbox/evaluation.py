"""Detection scoring: greedy IoU matching, per-class AP, and mAP.

The pipeline mirrors the classic oriented-detection protocol: detections are
ranked by score, greedily matched one-to-one against ground truth at a fixed
rotated-IoU threshold, and the per-class precision-recall curve is reduced
to average precision either at the eleven canonical recall points or over
the full precision envelope. mAP is the unweighted mean of AP over classes
that have at least one scoreable ground-truth object.

Ground truth marked difficult acts as an ignore-region: a detection that
lands on one is removed from scoring entirely (neither TP nor FP), and the
object itself never counts toward recall's denominator.

Everything is pure and deterministic; score ties resolve by input order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .annotations import DetectionRecord
from .errors import InvalidInputError
from .geometry import rotated_iou
from .transform import AnnotationRecord

__all__ = ["ClassResult", "EvalReport", "match_detections", "average_precision", "evaluate"]

MODES = ("eleven_point", "all_point")


@dataclass(frozen=True)
class ClassResult:
    ap: float
    num_gt: int
    num_det: int


@dataclass(frozen=True)
class EvalReport:
    """Per-class AP plus the summary mean.

    ``map_score`` averages ap over classes with num_gt > 0; classes that
    appear only in detections are reported but excluded from the mean.
    """

    per_class: dict[str, ClassResult]
    map_score: float
    iou_threshold: float
    mode: str


def match_detections(
    dets: list[DetectionRecord],
    gts: list[AnnotationRecord],
    iou_threshold: float,
) -> list[tuple[DetectionRecord, bool, bool]]:
    """Greedy one-to-one matching within a single image and category.

    Returns (det, matched, ignored) triples in descending-score order.
    Each detection takes the highest-IoU ground truth still available, if
    that IoU reaches the threshold. Difficult ground truth is always
    available and yields ignored=True without being consumed; IoU ties go
    to the earlier ground-truth record.
    """
    if not 0.0 < iou_threshold < 1.0:
        raise InvalidInputError(f"iou_threshold must be in (0, 1), got {iou_threshold}")
    order = sorted(range(len(dets)), key=lambda i: -dets[i].score)
    taken = [False] * len(gts)
    out = []
    for i in order:
        det = dets[i]
        best_iou = 0.0
        best_j = -1
        for j, gt in enumerate(gts):
            if taken[j] and gt.difficulty == 0:
                continue
            iou = rotated_iou(det.box, gt.box)
            if iou > best_iou:
                best_iou, best_j = iou, j
        if best_j >= 0 and best_iou >= iou_threshold:
            if gts[best_j].difficulty != 0:
                out.append((det, False, True))
            else:
                taken[best_j] = True
                out.append((det, True, False))
        else:
            out.append((det, False, False))
    return out


def average_precision(
    matches: list[tuple[float, bool, bool]],
    num_gt: int,
    mode: str = "eleven_point",
) -> float:
    """AP for one class from (score, matched, ignored) triples pooled over
    all images.

    Ignored detections drop out before the curve is built. num_gt counts
    non-difficult ground truth only. With num_gt == 0 the value is 0.0 and
    the caller leaves the class out of the mean.
    """
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}, got {mode!r}")
    if num_gt < 0:
        raise InvalidInputError(f"num_gt must be >= 0, got {num_gt}")
    if num_gt == 0:
        return 0.0
    scored = [(s, m) for s, m, ign in matches if not ign]
    scored.sort(key=lambda t: -t[0])  # stable: ties keep input order
    tp_at = []  # cumulative TP/FP after each detection
    fp_at = []
    tp = fp = 0
    for _, m in scored:
        if m:
            tp += 1
        else:
            fp += 1
        tp_at.append(tp)
        fp_at.append(fp)

    if mode == "eleven_point":
        total = 0.0
        for tenth in range(11):
            best = 0.0
            for k in range(len(tp_at)):
                # recall >= tenth/10, compared in integers to dodge 0.1-step
                # rounding (3/10 vs 0.30000000000000004)
                if 10 * tp_at[k] >= tenth * num_gt:
                    p = tp_at[k] / (tp_at[k] + fp_at[k])
                    if p > best:
                        best = p
            total += best
        return total / 11.0

    # all_point: area under the precision envelope
    recalls = [t / num_gt for t in tp_at]
    precs = [t / (t + f) for t, f in zip(tp_at, fp_at)]
    ap = 0.0
    prev_r = 0.0
    k = 0
    n = len(recalls)
    while k < n:
        # the envelope value at this recall is the max precision at any
        # recall >= recalls[k]
        r = recalls[k]
        env = max(precs[k:])
        if r > prev_r:
            ap += (r - prev_r) * env
            prev_r = r
        k += 1
    return ap


def evaluate(
    dets,
    gts,
    iou_threshold: float = 0.5,
    mode: str = "eleven_point",
) -> EvalReport:
    """Full evaluation over a dataset.

    ``dets`` is an iterable of DetectionRecord; ``gts`` maps image_id to
    that image's list of AnnotationRecord. Detections on images absent
    from ``gts`` score against an empty ground-truth set (all FP).
    """
    if not 0.0 < iou_threshold < 1.0:
        raise InvalidInputError(f"iou_threshold must be in (0, 1), got {iou_threshold}")
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}, got {mode!r}")

    dets = list(dets)
    det_by_img_cat: dict[tuple[str, str], list[DetectionRecord]] = {}
    for d in dets:
        det_by_img_cat.setdefault((d.image_id, d.category), []).append(d)
    gt_by_img_cat: dict[tuple[str, str], list[AnnotationRecord]] = {}
    for image_id, recs in gts.items():
        for r in recs:
            gt_by_img_cat.setdefault((image_id, r.category), []).append(r)

    categories = sorted({c for _, c in det_by_img_cat} | {c for _, c in gt_by_img_cat})
    per_class: dict[str, ClassResult] = {}
    scoreable = []
    for cat in categories:
        pooled: list[tuple[float, bool, bool]] = []
        num_gt = 0
        num_det = 0
        images = {img for img, c in det_by_img_cat if c == cat} | {
            img for img, c in gt_by_img_cat if c == cat
        }
        for img in sorted(images):
            img_dets = det_by_img_cat.get((img, cat), [])
            img_gts = gt_by_img_cat.get((img, cat), [])
            num_det += len(img_dets)
            num_gt += sum(1 for g in img_gts if g.difficulty == 0)
            for det, matched, ignored in match_detections(img_dets, img_gts, iou_threshold):
                pooled.append((det.score, matched, ignored))
        ap = average_precision(pooled, num_gt, mode)
        per_class[cat] = ClassResult(ap=ap, num_gt=num_gt, num_det=num_det)
        if num_gt > 0:
            scoreable.append(ap)
    map_score = sum(scoreable) / len(scoreable) if scoreable else 0.0
    return EvalReport(per_class=per_class, map_score=map_score, iou_threshold=iou_threshold, mode=mode)
