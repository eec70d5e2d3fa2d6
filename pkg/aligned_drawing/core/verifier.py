"""
Exact verification of aligned drawings.

verify_aligned checks a concrete drawing against an aligned graph property by property;
every predicate is evaluated on rationals, so a pass is a proof and a failure comes with
a witness.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from aligned_drawing.core.annotate import geometric_outer_dart, geometric_rotation
from aligned_drawing.core.arrangement import (
    TrackHit,
    locate,
    same_line,
    sort_ccw,
    track_hits,
    track_param,
)
from aligned_drawing.core.exactgeom import segment_cross
from aligned_drawing.core.planar import build_embedding
from aligned_drawing.exceptions import AlignedError, InconsistentAnnotation
from aligned_drawing.models.aligned import AlignedGraph, Item, Placement
from aligned_drawing.models.drawing import Drawing, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import CrossKind, Point
from aligned_drawing.models.report import CheckResult, VerdictReport
from aligned_drawing.utils.logger import logger


class _Stop(Exception):
    pass


@dataclass
class _Collector:
    """Accumulates check results, aborting early when asked to."""

    stop_at_first: bool = False
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, prop: str, ok: bool, witness=None, expected=None, observed=None) -> bool:
        self.checks.append(CheckResult(prop, ok, witness, expected, observed))
        if not ok:
            logger.debug(f"verify: {prop} failed at {witness}")
            if self.stop_at_first:
                raise _Stop()
        return ok


def _check_arrangement(ag: AlignedGraph, d: Drawing, out: _Collector) -> bool:
    arr = ag.arr
    geom = d.lines
    if arr.is_star:
        if not isinstance(geom, StarGeometry):
            return out.add("arrangement", False, "kind", "star", "parallel")
        if geom.k != arr.size:
            return out.add("arrangement", False, "k", arr.size, geom.k)
        n = len(geom.directions)
        for j in range(arr.size):
            a, b = geom.direction(j), geom.direction(j + arr.size)
            if a.cross(b) != 0 or a.dot(b) >= 0:
                return out.add("arrangement", False, ("opposite", j), "opposite rays", (a, b))
        order = [int(key) for key in sort_ccw({str(j): geom.direction(j) for j in range(n)})]
        start = order.index(0)
        rotated = order[start:] + order[:start]
        distinct = all(geom.direction(j).cross(geom.direction(j + 1)) != 0 for j in range(n))
        if rotated != list(range(n)) or not distinct:
            return out.add("arrangement", False, "ray order", list(range(n)), rotated)
        return out.add("arrangement", True)
    if not isinstance(geom, ParallelGeometry):
        return out.add("arrangement", False, "kind", "parallel", "star")
    if geom.m != arr.size:
        return out.add("arrangement", False, "m", arr.size, geom.m)
    if any(lo >= hi for lo, hi in zip(geom.ys, geom.ys[1:])):
        return out.add("arrangement", False, "layer order", "increasing", list(geom.ys))
    return out.add("arrangement", True)


def _check_planarity(
    ag: AlignedGraph, coords: Dict[str, Point], out: _Collector, focus: Optional[str] = None
) -> bool:
    seen: Dict[Point, str] = {}
    for v in ag.vertices:
        p = coords[v]
        if p in seen and (focus is None or focus in (v, seen[p])):
            return out.add("planar", False, (seen[p], v), "distinct points", p)
        seen[p] = v

    edges = list(ag.edges.items())
    ok = True
    for i, (e, (a, b)) in enumerate(edges):
        for f, (c, dd) in edges[i + 1 :]:
            if focus is not None and focus not in (a, b, c, dd):
                continue
            hit = segment_cross((coords[a], coords[b]), (coords[c], coords[dd]))
            shared = {a, b} & {c, dd}
            if shared:
                good = hit.kind is CrossKind.TOUCH and hit.point == coords[shared.pop()]
            else:
                good = hit.kind is CrossKind.NONE
            if not good:
                ok = out.add("planar", False, (e, f), "disjoint interiors", hit.kind.value)
    if ok:
        out.add("planar", True)
    return ok


def _cyclic_key(rot: Sequence[str]) -> Tuple[str, ...]:
    if not rot:
        return ()
    i = list(rot).index(min(rot))
    return tuple(rot[i:]) + tuple(rot[:i])


def _check_embedding(
    ag: AlignedGraph, coords: Dict[str, Point], out: _Collector, focus: Optional[str] = None
) -> bool:
    g = ag.graph
    drawn = geometric_rotation(coords, g.edges)
    targets = list(g.vertices) if focus is None else [focus] + g.neighbors(focus)
    ok = True
    for v in targets:
        want, got = _cyclic_key(g.rotation[v]), _cyclic_key(drawn[v])
        if want != got:
            ok = out.add("embedding", False, v, list(want), list(got))
    if not ok or focus is not None or not g.edges:
        if ok:
            out.add("embedding", True)
        return ok
    geo = build_embedding(g.vertices, drawn, g.edges, g.outer)
    outer = geometric_outer_dart(geo, coords)
    if g.outer_face is None or outer not in g.outer_face.darts:
        return out.add("embedding", False, "outer face", g.outer, outer)
    return out.add("embedding", True)


def _check_placement(
    ag: AlignedGraph,
    d: Drawing,
    located: Dict[str, Placement],
    out: _Collector,
    focus: Optional[str] = None,
) -> bool:
    ok = True
    for v in ag.vertices if focus is None else [focus]:
        want = ag.placement[v].unranked()
        if located[v] != want:
            ok = out.add("placement", False, v, str(want), str(located[v]))
    if ok:
        out.add("placement", True)
    return ok


def _edge_hits(ag: AlignedGraph, d: Drawing, e: str) -> Optional[List[TrackHit]]:
    """Track hits of a non-aligned edge; None if the segment meets the star origin."""
    a, b = ag.edges[e]
    try:
        return track_hits(d.lines, d.coords[a], d.coords[b])
    except InconsistentAnnotation:
        return None


def _check_crossings(
    ag: AlignedGraph,
    d: Drawing,
    located: Dict[str, Placement],
    hits: Dict[str, Optional[List[TrackHit]]],
    out: _Collector,
    edges: Sequence[str],
) -> bool:
    ok = True
    geom = d.lines
    for e in edges:
        a, b = ag.edges[e]
        spec = ag.crossings[e]
        on_one_line = same_line(geom, ag.arr, located[a], located[b])
        if spec.aligned:
            if not on_one_line:
                ok = out.add("crossings", False, e, "aligned", "off its line")
            continue
        if on_one_line:
            ok = out.add("crossings", False, e, "crossing pattern", "lies on a line")
            continue
        found = hits[e]
        if found is None:
            ok = out.add("crossings", False, e, spec.tracks, "passes the origin")
            continue
        observed = [h.track for h in found]
        if observed != spec.tracks:
            ok = out.add("crossings", False, e, spec.tracks, observed)
            continue
        points = [d.coords[a]] + [h.point for h in found] + [d.coords[b]]
        for j, (p, q) in enumerate(zip(points, points[1:])):
            mid = (p + q).scale(Fraction(1, 2))
            try:
                where = locate(geom, mid)
            except AlignedError:
                where = None
            want = Placement.in_cell(ag.cells[e][j])
            if where != want:
                ok = out.add("crossings", False, e, str(want), str(where))
                break
    if ok:
        out.add("crossings", True)
    return ok


def _drawn_orders(
    ag: AlignedGraph,
    d: Drawing,
    located: Dict[str, Placement],
    hits: Dict[str, Optional[List[TrackHit]]],
    tracks: Set[int],
) -> Dict[int, List[Item]]:
    entries: Dict[int, List[Tuple[Fraction, Item]]] = {t: [] for t in tracks}
    for v, pl in located.items():
        if pl.on_track and pl.index in tracks:
            t = track_param(d.lines, pl.index, d.coords[v])  # type: ignore[arg-type]
            entries[pl.index].append((t, ("v", v)))  # type: ignore[index]
    for e, found in hits.items():
        for h in found or ():
            if h.track in tracks:
                entries[h.track].append((track_param(d.lines, h.track, h.point), ("x", e)))
    return {
        t: [item for _, item in sorted(rows, key=lambda r: r[0])] for t, rows in entries.items()
    }


def _check_orders(
    ag: AlignedGraph,
    d: Drawing,
    located: Dict[str, Placement],
    hits: Dict[str, Optional[List[TrackHit]]],
    out: _Collector,
    tracks: Set[int],
) -> bool:
    ok = True
    drawn = _drawn_orders(ag, d, located, hits, tracks)
    for t in sorted(tracks):
        want = list(ag.orders.get(t, ()))
        if drawn[t] != want:
            ok = out.add("orders", False, t, want, drawn[t])
    if ok:
        out.add("orders", True)
    return ok


def verify_aligned(ag: AlignedGraph, d: Drawing, stop_at_first: bool = False) -> VerdictReport:
    """
    Check that a drawing is an aligned drawing of ag.

    The checks cover the arrangement, planarity and the embedding, vertex placement,
    the crossing pattern of every edge and the order of items along every track.

    Args:
        ag: Instance to check against
        d: Drawing with a point for every vertex of ag
        stop_at_first: Return as soon as one check fails

    Returns:
        VerdictReport listing every check performed
    """
    out = _Collector(stop_at_first)
    try:
        missing = [v for v in ag.vertices if v not in d.coords]
        if missing:
            out.add("placement", False, missing, "coordinates", "missing")
            return VerdictReport(out.checks)
        if not _check_arrangement(ag, d, out):
            return VerdictReport(out.checks)
        coords = {v: d.coords[v] for v in ag.vertices}
        if not _check_planarity(ag, coords, out):
            return VerdictReport(out.checks)
        _check_embedding(ag, coords, out)
        located = {v: locate(d.lines, coords[v]) for v in ag.vertices}
        _check_placement(ag, d, located, out)
        hits = {
            e: _edge_hits(ag, d, e) for e in ag.edges if not ag.crossings[e].aligned
        }
        _check_crossings(ag, d, located, hits, out, list(ag.edges))
        _check_orders(ag, d, located, hits, out, set(range(ag.arr.n_tracks)))
    except _Stop:
        pass
    return VerdictReport(out.checks)


def verify_local(ag: AlignedGraph, d: Drawing, vertex: str) -> bool:
    """
    Run the checks of verify_aligned that involve one vertex.

    Covers the vertex's placement, its incident edges against all edges, rotations at
    the vertex and its neighbours, and the orders of every track its edges touch.
    """
    out = _Collector(stop_at_first=True)
    try:
        if any(v not in d.coords for v in ag.vertices):
            return False
        coords = {v: d.coords[v] for v in ag.vertices}
        _check_planarity(ag, coords, out, focus=vertex)
        _check_embedding(ag, coords, out, focus=vertex)
        located = {v: locate(d.lines, coords[v]) for v in ag.vertices}
        _check_placement(ag, d, located, out, focus=vertex)
        incident = list(ag.graph.rotation[vertex])
        hits = {
            e: _edge_hits(ag, d, e) for e in ag.edges if not ag.crossings[e].aligned
        }
        _check_crossings(ag, d, located, hits, out, incident)
        tracks: Set[int] = set()
        if located[vertex].on_track:
            tracks.add(located[vertex].index)  # type: ignore[arg-type]
        for e in incident:
            tracks.update(h.track for h in hits.get(e) or ())
        _check_orders(ag, d, located, hits, out, tracks)
    except _Stop:
        return False
    except AlignedError:
        return False
    return True


def check_edge_crossing_order(d: Drawing, edge: Tuple[str, str], line: int) -> Optional[Fraction]:
    """
    Where the segment of an edge meets a line of the drawing's arrangement.

    For a star the line is pseudoline `line` (rays line and line+k) and the parameter is
    measured along the direction of ray `line`, so negative values lie on the opposite
    ray. For a parallel arrangement the parameter is the x-coordinate on layer `line`.
    Touching the line with an endpoint counts as meeting it.

    Returns:
        The exact parameter, or None if the segment misses the line or lies on it
    """
    a, b = d.coords[edge[0]], d.coords[edge[1]]
    geom = d.lines
    if isinstance(geom, StarGeometry):
        direction = geom.direction(line)
        sa, sb = direction.cross(a), direction.cross(b)
    else:
        y = geom.ys[line]
        direction = Point(1, 0)
        sa, sb = a.y - y, b.y - y
    if (sa > 0 and sb > 0) or (sa < 0 and sb < 0) or (sa == 0 and sb == 0):
        return None
    point = a + (b - a).scale(sa / (sa - sb))
    return point.dot(direction) / direction.dot(direction)
