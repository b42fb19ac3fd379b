"""Label-space noise injection for oriented boxes.

Per box: random scaling, then rotation, then translation, each driven by its
own draws from a caller-supplied stream. Boxes whose original width or height
is at or below ``gamma`` pass through untouched and consume no draws, so the
gate threshold changes the stream alignment of everything after it by design;
golden outputs are tied to this skip-don't-mask behavior.

Stream consumption is part of the determinism contract:

* scaling: one float draw (isotropic) or two (anisotropic),
* rotation: one float draw,
* translation: one int draw (isotropic) or two (anisotropic),
* a degenerate float range (min == max) is a constant, not a draw — the
  float sampler's domain is half-open and cannot express it. Integer
  singletons ARE drawn (the int sampler accepts them and advances).

Stages touch disjoint fields (scale: w,h; rotate: theta; translate: center),
so geometry composes in any order; the fixed order above only pins which
draw lands where.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import NoiseConfig
from .errors import InvalidInputError
from .geometry import OrientedBox
from .rng import RngStream

__all__ = ["AnnotationRecord", "noisy_scale", "noisy_rotate", "noisy_translate", "nbbox_apply"]


@dataclass(frozen=True)
class AnnotationRecord:
    """One labeled object: box, category name, and a difficulty flag.

    Categories stay opaque strings; 0 difficulty means a normal object and
    anything else marks it hard (evaluation treats those as ignore-regions).
    """

    box: OrientedBox
    category: str
    difficulty: int = 0

    def __post_init__(self):
        if not self.category:
            raise InvalidInputError("category must be non-empty")
        if not isinstance(self.difficulty, int) or isinstance(self.difficulty, bool):
            raise InvalidInputError(f"difficulty must be an int, got {self.difficulty!r}")


def noisy_scale(box: OrientedBox, cfg: NoiseConfig, stream: RngStream) -> OrientedBox:
    """Multiply w and h by random factors; center and angle unchanged.

    Isotropic mode uses one factor for both axes, preserving aspect ratio.
    """
    if not cfg.scale_enabled:
        return box
    if cfg.s_min == cfg.s_max:
        s_w = s_h = cfg.s_min
    else:
        s_w = stream.rand_float(cfg.s_min, cfg.s_max)
        s_h = s_w if cfg.isotropic_scale else stream.rand_float(cfg.s_min, cfg.s_max)
    return replace(box, w=box.w * s_w, h=box.h * s_h)


def noisy_rotate(box: OrientedBox, cfg: NoiseConfig, stream: RngStream) -> OrientedBox:
    """Add a random offset (degrees) to the angle; stored unnormalized."""
    if not cfg.rotate_enabled:
        return box
    r = cfg.r_min if cfg.r_min == cfg.r_max else stream.rand_float(cfg.r_min, cfg.r_max)
    return replace(box, theta=box.theta + r)


def noisy_translate(box: OrientedBox, cfg: NoiseConfig, stream: RngStream) -> OrientedBox:
    """Shift the center by random whole pixels; extents and angle unchanged.

    Isotropic mode shifts x and y by the same amount. No clamping to any
    image boundary happens here.
    """
    if not cfg.translate_enabled:
        return box
    t_x = stream.rand_int(cfg.t_min, cfg.t_max)
    t_y = t_x if cfg.isotropic_translate else stream.rand_int(cfg.t_min, cfg.t_max)
    return replace(box, x_c=box.x_c + t_x, y_c=box.y_c + t_y)


def nbbox_apply(
    labels: list[AnnotationRecord], cfg: NoiseConfig, stream: RngStream
) -> list[AnnotationRecord]:
    """Apply the full noise pipeline to a list of records, in order.

    The gamma gate tests the ORIGINAL extents: records with
    w <= gamma or h <= gamma are emitted as-is with no draws consumed.
    Output preserves length, order, categories, and difficulty flags.
    """
    out: list[AnnotationRecord] = []
    for rec in labels:
        b = rec.box
        if b.w <= cfg.gamma or b.h <= cfg.gamma:
            out.append(rec)
            continue
        b = noisy_scale(b, cfg, stream)
        b = noisy_rotate(b, cfg, stream)
        b = noisy_translate(b, cfg, stream)
        out.append(rec if b is rec.box else replace(rec, box=b))
    return out
