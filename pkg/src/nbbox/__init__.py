"""Training-time label noise for oriented bounding boxes.

Injects small random scaling, rotation, and translation into rotated-box
annotations (a regularizer that costs nothing at inference), and ships the
surrounding tooling: DOTA-format I/O, rotated-box geometry, mAP evaluation,
and detector-free noise analyses.
"""

from .analysis import (
    DiscrepancyStats,
    RecordDiscrepancy,
    SweepResult,
    SweepRow,
    config_summary,
    discrepancy_report,
    noise_sweep,
)
from .annotations import (
    AnnotationFile,
    DetectionRecord,
    SourcedRecord,
    annotation_file_from_records,
    detection_from_box,
    read_dota_annotations,
    read_dota_detections,
    write_dota_annotations,
)
from .config import NoiseConfig, default_config, dump_config, load_config, parse_config_text
from .errors import ConfigError, InvalidInputError, InvalidRangeError, NbboxError, ParseError
from .evaluation import ClassResult, EvalReport, average_precision, evaluate, match_detections
from .geometry import (
    EPS_GEOM,
    ConvexPolygon,
    OrientedBox,
    Point2,
    canonicalize,
    convex_intersection,
    min_area_rect,
    obb_to_polygon,
    rotated_iou,
)
from .rng import RngStream
from .transform import AnnotationRecord, nbbox_apply, noisy_rotate, noisy_scale, noisy_translate

__version__ = "0.1.0"

__all__ = [
    "AnnotationFile",
    "AnnotationRecord",
    "ClassResult",
    "ConfigError",
    "ConvexPolygon",
    "DetectionRecord",
    "DiscrepancyStats",
    "EPS_GEOM",
    "EvalReport",
    "InvalidInputError",
    "InvalidRangeError",
    "NbboxError",
    "NoiseConfig",
    "OrientedBox",
    "ParseError",
    "Point2",
    "RecordDiscrepancy",
    "RngStream",
    "SourcedRecord",
    "SweepResult",
    "SweepRow",
    "annotation_file_from_records",
    "average_precision",
    "canonicalize",
    "config_summary",
    "convex_intersection",
    "default_config",
    "detection_from_box",
    "discrepancy_report",
    "dump_config",
    "evaluate",
    "load_config",
    "match_detections",
    "min_area_rect",
    "nbbox_apply",
    "noise_sweep",
    "noisy_rotate",
    "noisy_scale",
    "noisy_translate",
    "obb_to_polygon",
    "parse_config_text",
    "read_dota_annotations",
    "read_dota_detections",
    "rotated_iou",
    "write_dota_annotations",
]
