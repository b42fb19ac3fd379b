"""Rotated-rectangle primitives.

Corner expansion, convex hull, minimum-area enclosing rectangle (hull +
rotating-calipers edge sweep), Sutherland-Hodgman clipping, and rotated IoU.

Conventions used throughout the package:

* angles are degrees and are never normalized implicitly; use
  :func:`canonicalize` to map a box into the ``[-90, 90)`` representation,
* polygons are counter-clockwise in standard math orientation,
* ``EPS_GEOM`` (1e-9 px) is the tolerance for all geometric predicates;
  coordinates are pixel-scale so double precision leaves ample headroom.

Everything here is a pure function on immutable values and is safe to call
concurrently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import InvalidInputError

EPS_GEOM = 1e-9

__all__ = [
    "EPS_GEOM",
    "Point2",
    "OrientedBox",
    "ConvexPolygon",
    "obb_to_polygon",
    "min_area_rect",
    "convex_intersection",
    "rotated_iou",
    "canonicalize",
    "convex_hull",
    "polygon_area",
]


@dataclass(frozen=True, slots=True)
class Point2:
    """A 2-D point in pixel coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class OrientedBox:
    """A rotated rectangle: center, extents, and rotation angle in degrees.

    ``theta`` is unbounded by design; arithmetic on it (e.g. adding rotation
    noise) stores the raw result. :func:`canonicalize` produces the unique
    ``[-90, 90)`` representation when one is needed.
    """

    x_c: float
    y_c: float
    w: float
    h: float
    theta: float

    def __post_init__(self):
        vals = (self.x_c, self.y_c, self.w, self.h, self.theta)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInputError(f"box fields must be finite, got {vals}")
        if self.w <= 0 or self.h <= 0:
            raise InvalidInputError(f"box extents must be positive, got w={self.w}, h={self.h}")

    @property
    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class ConvexPolygon:
    """A strictly convex polygon, vertices counter-clockwise.

    Construct via the factory functions in this module; the constructor only
    checks cheap invariants (vertex count and orientation).
    """

    vertices: tuple[Point2, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise InvalidInputError(f"polygon needs >= 3 vertices, got {len(self.vertices)}")
        if _shoelace([(p.x, p.y) for p in self.vertices]) <= 0:
            raise InvalidInputError("polygon vertices must be counter-clockwise")

    @property
    def area(self) -> float:
        return _shoelace([(p.x, p.y) for p in self.vertices])


def _shoelace(coords: list[tuple[float, float]]) -> float:
    """Signed area of a closed polygon (positive for counter-clockwise).

    Computed relative to the first vertex: translation-invariant on paper,
    and in floats it avoids the cancellation that wrecks small polygons far
    from the origin.
    """
    ox, oy = coords[0]
    s = 0.0
    n = len(coords)
    for i in range(n):
        x0, y0 = coords[i][0] - ox, coords[i][1] - oy
        x1, y1 = coords[(i + 1) % n][0] - ox, coords[(i + 1) % n][1] - oy
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def polygon_area(poly: ConvexPolygon) -> float:
    return poly.area


def obb_to_polygon(box: OrientedBox) -> ConvexPolygon:
    """The 4 corners of ``box``, counter-clockwise.

    Starts at the (-w/2, -h/2) corner in the box frame and walks
    counter-clockwise; round-trips with :func:`min_area_rect` up to EPS_GEOM.
    """
    rad = math.radians(box.theta)
    c, s = math.cos(rad), math.sin(rad)
    hw, hh = box.w / 2.0, box.h / 2.0
    corners = []
    for dx, dy in ((-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)):
        corners.append(Point2(box.x_c + dx * c - dy * s, box.y_c + dx * s + dy * c))
    return ConvexPolygon(tuple(corners))


def convex_hull(points: list[Point2]) -> list[Point2]:
    """Convex hull by monotone chain, counter-clockwise.

    Collinear vertices are merged. Degenerate inputs collapse: a single
    distinct point gives a 1-point hull, collinear points give their two
    extreme endpoints.
    """
    if not points:
        raise InvalidInputError("convex_hull of empty point set")
    pts = sorted({(p.x, p.y) for p in points})
    if len(pts) == 1:
        return [Point2(*pts[0])]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    # pop on cross <= 0 exactly: a tolerance here can discard a true
    # extreme, because near-collinear runs need not be sorted along the
    # line direction; a kept sliver turn is harmless downstream
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and len(pts) > 2:
        # near-collinear collapse: when the lexicographic sort disagrees
        # with the line direction, the pop survivors need not span the
        # set; recover the true extremes by projecting onto the
        # centroid-to-farthest axis
        cx = sum(x for x, _ in pts) / len(pts)
        cy = sum(y for _, y in pts) / len(pts)
        fx, fy = max(pts, key=lambda p: (p[0] - cx) ** 2 + (p[1] - cy) ** 2)
        nrm = math.hypot(fx - cx, fy - cy)
        if nrm > 0.0:
            ux, uy = (fx - cx) / nrm, (fy - cy) / nrm
            proj = [((p[0] - cx) * ux + (p[1] - cy) * uy, p) for p in pts]
            lo = min(proj)[1]
            hi = max(proj)[1]
            if lo != hi:
                hull = [lo, hi]
    return [Point2(x, y) for x, y in hull]


def canonicalize(box: OrientedBox) -> OrientedBox:
    """Map to the equivalent representation with theta in [-90, 90).

    Prefers w >= h; exact squares resolve to theta in [-45, 45). Geometry
    (the corner set) is unchanged.
    """
    t = math.fmod(box.theta, 180.0)
    if t < -90.0:
        t += 180.0
    elif t >= 90.0:
        t -= 180.0
    alt = t + 90.0 if t < 0.0 else t - 90.0
    w, h = box.w, box.h
    if w > h:
        pick = (w, h, t)
    elif w < h:
        pick = (h, w, alt)
    else:
        pick = (w, h, t) if -45.0 <= t < 45.0 else (w, h, alt)
    w2, h2, t2 = pick
    # t + 90 can round up to exactly 90 for tiny negative t; 180 deg is a
    # rectangle symmetry, so wrapping keeps the same corner set
    if t2 >= 90.0:
        t2 -= 180.0
    elif t2 < -90.0:
        t2 += 180.0
    return OrientedBox(box.x_c, box.y_c, w2, h2, t2)


def min_area_rect(points: list[Point2]) -> OrientedBox:
    """Smallest-area rectangle enclosing ``points``.

    Computed from the convex hull by evaluating the oriented bounding box
    flush with each hull edge (rotating calipers). Output is canonicalized.

    Degenerate inputs are tolerated: a single point or a collinear set
    returns an EPS_GEOM-thin box aligned with the point spread (theta=0 for
    one point), with a warning; real annotation files do contain such quads.
    """
    if not points:
        raise InvalidInputError("min_area_rect of empty point set")
    hull = convex_hull(points)

    if len(hull) == 1:
        p = hull[0]
        warnings.warn("min_area_rect: degenerate input (single distinct point)")
        return OrientedBox(p.x, p.y, EPS_GEOM, EPS_GEOM, 0.0)
    if len(hull) == 2:
        p, q = hull
        warnings.warn("min_area_rect: degenerate input (collinear points)")
        ex, ey = q.x - p.x, q.y - p.y
        nrm = math.hypot(ex, ey)
        ux, uy = ex / nrm, ey / nrm
        # extents over the original points, not just the segment ends: the
        # hull collapse may have shed points with tiny perpendicular offset
        ss = [(pt.x - p.x) * ux + (pt.y - p.y) * uy for pt in points]
        ts = [-(pt.x - p.x) * uy + (pt.y - p.y) * ux for pt in points]
        smin, smax = min(ss), max(ss)
        tmin, tmax = min(ts), max(ts)
        cs, ct = (smin + smax) / 2.0, (tmin + tmax) / 2.0
        return canonicalize(
            OrientedBox(
                cs * ux - ct * uy + p.x,
                cs * uy + ct * ux + p.y,
                max(smax - smin, EPS_GEOM),
                max(tmax - tmin, EPS_GEOM),
                math.degrees(math.atan2(uy, ux)),
            )
        )

    # project relative to one hull vertex so far-from-origin point sets
    # keep full precision in the extents
    ox, oy = hull[0].x, hull[0].y
    best = None  # (area, smin, smax, tmin, tmax, ux, uy)
    n = len(hull)
    for i in range(n):
        p, q = hull[i], hull[(i + 1) % n]
        ex, ey = q.x - p.x, q.y - p.y
        norm = math.hypot(ex, ey)
        if norm <= EPS_GEOM:
            continue
        ux, uy = ex / norm, ey / norm
        # hull coordinates in the frame where this edge is the x-axis
        ss = [(v.x - ox) * ux + (v.y - oy) * uy for v in hull]
        ts = [-(v.x - ox) * uy + (v.y - oy) * ux for v in hull]
        smin, smax = min(ss), max(ss)
        tmin, tmax = min(ts), max(ts)
        area = (smax - smin) * (tmax - tmin)
        if best is None or area < best[0]:
            best = (area, smin, smax, tmin, tmax, ux, uy)

    assert best is not None
    _, smin, smax, tmin, tmax, ux, uy = best
    cs, ct = (smin + smax) / 2.0, (tmin + tmax) / 2.0
    x_c = cs * ux - ct * uy + ox
    y_c = cs * uy + ct * ux + oy
    w = max(smax - smin, EPS_GEOM)
    h = max(tmax - tmin, EPS_GEOM)
    theta = math.degrees(math.atan2(uy, ux))
    return canonicalize(OrientedBox(x_c, y_c, w, h, theta))


def _clip_by_edge(subject, a, b, eps):
    """One Sutherland-Hodgman pass: keep the part of ``subject`` on the left
    of the directed clip edge a->b. Points within ``eps`` of the edge count
    as inside, so a polygon clipped by itself survives unchanged."""
    if not subject:
        return subject
    out = []
    ex, ey = b[0] - a[0], b[1] - a[1]

    def side(p):
        return ex * (p[1] - a[1]) - ey * (p[0] - a[0])

    def intersect(p, q):
        # line through a-b meets segment p-q
        dx, dy = q[0] - p[0], q[1] - p[1]
        den = ex * dy - ey * dx
        if abs(den) < 1e-300:
            return q
        t = (ey * (p[0] - a[0]) - ex * (p[1] - a[1])) / den
        return (p[0] + t * dx, p[1] + t * dy)

    s = subject[-1]
    s_in = side(s) >= -eps
    for e in subject:
        e_in = side(e) >= -eps
        if e_in:
            if not s_in:
                out.append(intersect(s, e))
            out.append(e)
        elif s_in:
            out.append(intersect(s, e))
        s, s_in = e, e_in
    return out


def _clean_loop(coords):
    """Drop duplicate and collinear vertices from a closed loop."""
    pts = []
    for p in coords:
        if not pts or abs(p[0] - pts[-1][0]) > EPS_GEOM or abs(p[1] - pts[-1][1]) > EPS_GEOM:
            pts.append(p)
    while len(pts) >= 2 and abs(pts[0][0] - pts[-1][0]) <= EPS_GEOM and abs(pts[0][1] - pts[-1][1]) <= EPS_GEOM:
        pts.pop()
    if len(pts) < 3:
        return pts
    kept = []
    n = len(pts)
    for i in range(n):
        o, a, b = pts[i - 1], pts[i], pts[(i + 1) % n]
        cr = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        if abs(cr) > EPS_GEOM:
            kept.append(a)
    return kept


def convex_intersection(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon | None:
    """Intersection of two convex polygons, or ``None`` when (effectively)
    empty.

    Sutherland-Hodgman clipping of ``a`` against the edges of ``b``.
    Touching edges and slivers below EPS_GEOM area count as empty.
    """
    subject = [(p.x, p.y) for p in a.vertices]
    clip = [(p.x, p.y) for p in b.vertices]
    n = len(clip)
    for i in range(n):
        ca, cb = clip[i], clip[(i + 1) % n]
        elen = math.hypot(cb[0] - ca[0], cb[1] - ca[1])
        subject = _clip_by_edge(subject, ca, cb, EPS_GEOM * max(elen, 1.0))
        if not subject:
            return None
    subject = _clean_loop(subject)
    if len(subject) < 3 or _shoelace(subject) <= EPS_GEOM:
        return None
    return ConvexPolygon(tuple(Point2(x, y) for x, y in subject))


def rotated_iou(a: OrientedBox, b: OrientedBox) -> float:
    """Intersection-over-union of two rotated rectangles, in [0, 1].

    Areas are taken from the corner polygons so that identical boxes give
    exactly 1.0.
    """
    pa = obb_to_polygon(a)
    pb = obb_to_polygon(b)
    # cheap axis-aligned reject
    axs = [p.x for p in pa.vertices]
    ays = [p.y for p in pa.vertices]
    bxs = [p.x for p in pb.vertices]
    bys = [p.y for p in pb.vertices]
    if max(axs) < min(bxs) or max(bxs) < min(axs) or max(ays) < min(bys) or max(bys) < min(ays):
        return 0.0
    inter = convex_intersection(pa, pb)
    if inter is None:
        return 0.0
    ia = inter.area
    union = pa.area + pb.area - ia
    if union <= 0.0:
        return 0.0
    return min(max(ia / union, 0.0), 1.0)
