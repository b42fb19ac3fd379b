"""Reader/writer for DOTA-style annotation text.

Ground truth: one file per image, optional ``imagesource:`` / ``gsd:``
header lines, then one object per line as

    x1 y1 x2 y2 x3 y3 x4 y4 category difficulty

Detections: one file per category, each line

    image_id score x1 y1 x2 y2 x3 y3 x4 y4

The reader keeps every source line verbatim (terminators included) so that
writing an untouched file reproduces its bytes exactly; only records whose
box actually changed are re-serialized. Quadrilaterals become OrientedBox
values through the minimum-area enclosing rectangle, which is well-defined
even for the slightly non-rectangular quads real datasets contain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInputError, ParseError
from .geometry import OrientedBox, Point2, min_area_rect, obb_to_polygon
from .transform import AnnotationRecord

__all__ = [
    "SourcedRecord",
    "AnnotationFile",
    "DetectionRecord",
    "read_dota_annotations",
    "write_dota_annotations",
    "read_dota_detections",
    "annotation_file_from_records",
    "detection_from_box",
]

_HEADER_PREFIXES = ("imagesource:", "gsd:")


@dataclass(frozen=True)
class SourcedRecord:
    """An annotation record together with its on-disk form.

    ``quad`` is the 8-coordinate quadrilateral the box was derived from (or
    the box's own corners for synthesized records); ``raw`` is the exact
    source line including its terminator, None when the record did not come
    from a file.
    """

    record: AnnotationRecord
    quad: tuple[float, ...]
    raw: str | None = None

    def __post_init__(self):
        if len(self.quad) != 8 or not all(math.isfinite(v) for v in self.quad):
            raise InvalidInputError("quad must be 8 finite coordinates")


@dataclass(frozen=True)
class AnnotationFile:
    """Parsed annotation file: image id, headers, records, and enough layout
    to reproduce the source bytes."""

    image_id: str
    header_lines: tuple[str, ...]
    records: tuple[SourcedRecord, ...]
    # ("H", i) header, ("R", i) record, ("B", raw) blank line — source order
    layout: tuple[tuple[str, object], ...] = field(repr=False, default=())

    def __post_init__(self):
        if not self.image_id:
            raise InvalidInputError("image_id must be non-empty")
        if not self.layout:
            built = tuple(("H", i) for i in range(len(self.header_lines))) + tuple(
                ("R", i) for i in range(len(self.records))
            )
            object.__setattr__(self, "layout", built)

    def with_records(self, new_records) -> "AnnotationFile":
        """Same file with records replaced pairwise.

        A record equal to the one it replaces keeps its verbatim source
        line; a changed one is marked for re-serialization from its box.
        """
        new_records = list(new_records)
        if len(new_records) != len(self.records):
            raise InvalidInputError(
                f"record count mismatch: {len(new_records)} != {len(self.records)}"
            )
        slots = []
        for old, rec in zip(self.records, new_records):
            if rec == old.record:
                slots.append(old)
            else:
                corners = obb_to_polygon(rec.box).vertices
                quad = tuple(c for p in corners for c in (p.x, p.y))
                slots.append(SourcedRecord(rec, quad, raw=None))
        return AnnotationFile(self.image_id, self.header_lines, tuple(slots), self.layout)


def _parse_floats(tokens, source, line_no, what):
    vals = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(source, line_no, f"non-numeric {what} {tok!r}") from None
        if not math.isfinite(v):
            raise ParseError(source, line_no, f"non-finite {what} {tok!r}")
        vals.append(v)
    return vals


def _quad_to_box(quad) -> OrientedBox:
    pts = [Point2(quad[i], quad[i + 1]) for i in range(0, 8, 2)]
    return min_area_rect(pts)


def read_dota_annotations(text: str | bytes, image_id: str) -> AnnotationFile:
    """Parse one ground-truth file.

    Header lines are recognized only before the first record. Malformed
    lines raise ParseError with the line number; nothing is dropped
    silently.
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8")
    if not image_id:
        raise InvalidInputError("image_id must be non-empty")

    headers: list[str] = []
    records: list[SourcedRecord] = []
    layout: list[tuple[str, object]] = []
    in_header = True
    for line_no, raw in enumerate(text.splitlines(keepends=True), start=1):
        stripped = raw.strip()
        if not stripped:
            layout.append(("B", raw))
            continue
        if in_header and stripped.startswith(_HEADER_PREFIXES):
            layout.append(("H", len(headers)))
            headers.append(raw)
            continue
        in_header = False
        tokens = stripped.split()
        if len(tokens) != 10:
            raise ParseError(image_id, line_no, f"expected 10 fields, got {len(tokens)}")
        quad = tuple(_parse_floats(tokens[:8], image_id, line_no, "coordinate"))
        category = tokens[8]
        try:
            difficulty = int(tokens[9], 10)
        except ValueError:
            raise ParseError(image_id, line_no, f"non-integer difficulty {tokens[9]!r}") from None
        rec = AnnotationRecord(_quad_to_box(quad), category, difficulty)
        layout.append(("R", len(records)))
        records.append(SourcedRecord(rec, quad, raw))
    return AnnotationFile(image_id, tuple(headers), tuple(records), tuple(layout))


def _fmt_coord(v: float) -> str:
    s = f"{v:.1f}"
    return "0.0" if s == "-0.0" else s


def _terminator(raw: str | None) -> str:
    if raw is None:
        return "\n"
    body = raw.rstrip("\r\n")
    return raw[len(body):] or "\n"


def write_dota_annotations(file: AnnotationFile) -> bytes:
    """Serialize back to bytes.

    Untouched slots emit their original line verbatim; modified slots emit
    the box corners at one decimal place. Reading a file and writing it
    back unchanged is byte-identity.
    """
    parts: list[str] = []
    for kind, ref in file.layout:
        if kind == "B":
            parts.append(ref)  # type: ignore[arg-type]
        elif kind == "H":
            parts.append(file.header_lines[ref])  # type: ignore[index]
        else:
            slot = file.records[ref]  # type: ignore[index]
            if slot.raw is not None:
                parts.append(slot.raw)
            else:
                coords = " ".join(_fmt_coord(v) for v in slot.quad)
                rec = slot.record
                parts.append(f"{coords} {rec.category} {rec.difficulty}\n")
    return "".join(parts).encode("utf-8")


def annotation_file_from_records(image_id: str, records, header_lines=()) -> AnnotationFile:
    """Build a file object from bare records (for synthesis in tests and
    scripts); quads are the boxes' own corners."""
    slots = []
    for rec in records:
        corners = obb_to_polygon(rec.box).vertices
        quad = tuple(c for p in corners for c in (p.x, p.y))
        slots.append(SourcedRecord(rec, quad, raw=None))
    headers = tuple(h if h.endswith("\n") else h + "\n" for h in header_lines)
    return AnnotationFile(image_id, headers, tuple(slots))


@dataclass(frozen=True)
class DetectionRecord:
    """One scored detection, category taken from the containing file."""

    image_id: str
    score: float
    quad: tuple[float, ...]
    category: str
    box: OrientedBox

    def __post_init__(self):
        if not self.image_id:
            raise InvalidInputError("image_id must be non-empty")
        if not self.category:
            raise InvalidInputError("category must be non-empty")
        if not (math.isfinite(self.score) and 0.0 <= self.score <= 1.0):
            raise InvalidInputError(f"score must be in [0, 1], got {self.score}")
        if len(self.quad) != 8 or not all(math.isfinite(v) for v in self.quad):
            raise InvalidInputError("quad must be 8 finite coordinates")


def detection_from_box(image_id: str, score: float, box: OrientedBox, category: str) -> DetectionRecord:
    corners = obb_to_polygon(box).vertices
    quad = tuple(c for p in corners for c in (p.x, p.y))
    return DetectionRecord(image_id, score, quad, category, box)


def read_dota_detections(streams) -> list[DetectionRecord]:
    """Parse per-category detection files.

    ``streams`` maps category name to that category's file content (str or
    bytes). Records keep the iteration order of the mapping, then line
    order; the evaluator relies on this for stable score tie-breaking.
    """
    out: list[DetectionRecord] = []
    for category, text in streams.items():
        if isinstance(text, (bytes, bytearray)):
            text = bytes(text).decode("utf-8")
        for line_no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped:
                continue
            tokens = stripped.split()
            if len(tokens) != 10:
                raise ParseError(category, line_no, f"expected 10 fields, got {len(tokens)}")
            image_id = tokens[0]
            (score,) = _parse_floats(tokens[1:2], category, line_no, "score")
            if not 0.0 <= score <= 1.0:
                raise ParseError(category, line_no, f"score out of [0, 1]: {score}")
            quad = tuple(_parse_floats(tokens[2:], category, line_no, "coordinate"))
            out.append(DetectionRecord(image_id, score, quad, category, _quad_to_box(quad)))
    return out
