"""
Concrete line arrangements: where points sit and where segments cross the tracks.

Star tracks are the rays t*d_t for t > 0; parallel tracks are the horizontal lines
y = ys[l]. Parameters along a track are dot(p, d)/dot(d, d) on a ray and x on a layer.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Sequence

from aligned_drawing.exceptions import InconsistentAnnotation
from aligned_drawing.models.aligned import Arrangement, Placement
from aligned_drawing.models.drawing import Geometry, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import ORIGIN, HalfPlane, Point


@dataclass(frozen=True)
class TrackHit:
    """A proper crossing of a segment with a track; position is the segment parameter."""

    track: int
    position: Fraction
    point: Point


def arrangement_of(geom: Geometry) -> Arrangement:
    if isinstance(geom, StarGeometry):
        return Arrangement.star(geom.k)
    return Arrangement.parallel(geom.m)


def track_direction(geom: Geometry, t: int) -> Point:
    if isinstance(geom, StarGeometry):
        return geom.direction(t)
    return Point(1, 0)


def track_point(geom: Geometry, t: int, s: Fraction) -> Point:
    """Point at parameter s along track t."""
    if isinstance(geom, StarGeometry):
        return geom.direction(t).scale(s)
    return Point(s, geom.ys[t])


def track_param(geom: Geometry, t: int, p: Point) -> Fraction:
    if isinstance(geom, StarGeometry):
        d = geom.direction(t)
        return p.dot(d) / d.dot(d)
    return p.x


def on_track(geom: Geometry, t: int, p: Point) -> bool:
    if isinstance(geom, StarGeometry):
        d = geom.direction(t)
        return d.cross(p) == 0 and d.dot(p) > 0
    return p.y == geom.ys[t]


def locate(geom: Geometry, p: Point) -> Placement:
    """
    Placement of a point: origin, on a track, or inside a cell.

    Star cell i is the open wedge strictly left of ray i and strictly right of ray i+1.
    """
    if isinstance(geom, StarGeometry):
        if p == ORIGIN:
            return Placement.origin()
        n = len(geom.directions)
        for t in range(n):
            if on_track(geom, t, p):
                return Placement.on_ray(t)
        for c in range(n):
            if geom.direction(c).cross(p) > 0 and geom.direction(c + 1).cross(p) < 0:
                return Placement.in_cell(c)
        raise InconsistentAnnotation(f"Point {p} falls in no cell of the star", witness=p)
    ys = geom.ys
    for layer, y in enumerate(ys):
        if p.y == y:
            return Placement.on_layer(layer)
    return Placement.in_cell(sum(1 for y in ys if y < p.y))


def same_line(geom: Geometry, arr: Arrangement, a: Placement, b: Placement) -> bool:
    """Whether two placements lie on one pseudoline (the origin lies on all of them)."""
    if isinstance(geom, StarGeometry):
        if a.is_origin or b.is_origin:
            return (a.is_origin and b.on_track) or (b.is_origin and a.on_track)
        if not (a.on_track and b.on_track):
            return False
        return arr.line_of(a.index) == arr.line_of(b.index)  # type: ignore[arg-type]
    return a.on_track and b.on_track and a.index == b.index


def track_hits(geom: Geometry, a: Point, b: Point) -> List[TrackHit]:
    """
    Proper crossings of the open segment ab with the tracks, ordered from a to b.

    Raises:
        InconsistentAnnotation: If the segment passes through the star's origin
    """
    hits: List[TrackHit] = []
    if isinstance(geom, StarGeometry):
        for i in range(geom.k):
            d = geom.direction(i)
            sa, sb = d.cross(a), d.cross(b)
            if sa * sb >= 0:
                continue
            tau = sa / (sa - sb)
            point = a + (b - a).scale(tau)
            along = d.dot(point)
            if along == 0:
                raise InconsistentAnnotation(
                    f"Segment {a}-{b} passes through the origin", witness=(a, b)
                )
            hits.append(TrackHit(i if along > 0 else i + geom.k, tau, point))
    else:
        for layer, y in enumerate(geom.ys):
            if (a.y - y) * (b.y - y) >= 0:
                continue
            tau = (y - a.y) / (b.y - a.y)
            hits.append(TrackHit(layer, tau, a + (b - a).scale(tau)))
    hits.sort(key=lambda h: h.position)
    return hits


def cell_halfplanes(geom: Geometry, cell: int) -> List[HalfPlane]:
    """Strict half-planes whose intersection is the open cell."""
    if isinstance(geom, StarGeometry):
        d0, d1 = geom.direction(cell), geom.direction(cell + 1)
        return [HalfPlane.left_of(ORIGIN, d0), HalfPlane.left_of(d1, ORIGIN)]
    ys = geom.ys
    result = []
    if cell > 0:
        result.append(HalfPlane(0, 1, -ys[cell - 1]))
    if cell < len(ys):
        result.append(HalfPlane(0, -1, ys[cell]))
    return result


def _half(v: Point) -> int:
    return 0 if v.y > 0 or (v.y == 0 and v.x > 0) else 1


def _angle_cmp(a: Point, b: Point) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = a.cross(b)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_ccw(vectors: Dict[str, Point]) -> List[str]:
    """Keys ordered counterclockwise by direction, starting at the positive x-axis."""
    keyed = cmp_to_key(lambda x, y: _angle_cmp(vectors[x], vectors[y]))
    return sorted(vectors, key=keyed)


def signed_area2(points: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        total += points[i].cross(points[(i + 1) % n])
    return total


def wedge_combination(geom: StarGeometry, cell: int, alpha: Fraction, beta: Fraction) -> Point:
    """alpha*d_cell + beta*d_{cell+1}; inside the cell for positive weights."""
    return geom.direction(cell).scale(alpha) + geom.direction(cell + 1).scale(beta)


def layer_gap_point(geom: ParallelGeometry, cell: int, x: Fraction, frac: Fraction) -> Point:
    """Point at horizontal position x inside a parallel cell, frac in (0, 1) from its bottom."""
    ys = geom.ys
    lo = ys[cell - 1] if cell > 0 else ys[0] - 1
    hi = ys[cell] if cell < len(ys) else ys[-1] + 1
    return Point(x, lo + (hi - lo) * frac)

