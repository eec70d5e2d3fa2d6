"""
Straight-line drawing of reduced star triangulations and the full star pipeline.

Corners (sources of separating edges) go to integer radii on their rays, every free
vertex goes into a small polygon cut out by lines through the corners, and the remaining
ray vertices are slotted between the crossings their ray receives.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from aligned_drawing.core.aligned_model import combs, is_separating
from aligned_drawing.core.arrangement import cell_halfplanes, track_param, track_point
from aligned_drawing.core.exactgeom import interior_point, polygon_from_halfplanes
from aligned_drawing.core.lifting import DEFAULT_MAX_HALVINGS, lift_verified
from aligned_drawing.core.reduce_star import reduce_star
from aligned_drawing.exceptions import EmptyPlacementRegion, OrderingConflict, ZeroArea
from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.drawing import Drawing, StarGeometry
from aligned_drawing.models.geometry import ORIGIN, HalfPlane, Point, RegionKind
from aligned_drawing.models.plan import ReducedStarTriangulation
from aligned_drawing.utils.logger import logger


def make_star_geometry(k: int) -> StarGeometry:
    """
    Rational ray directions for k pseudolines through the origin.

    Ray j < k points along ((1-t^2), 2t) / (1+t^2) with t = j/(k-j), so the upper rays
    sweep the half-plane counterclockwise from the positive x-axis; ray j+k is -ray j.
    """
    if k < 2:
        raise ValueError(f"A star needs at least two pseudolines, got {k}")
    upper = []
    for j in range(k):
        t = Fraction(j, k - j)
        s = 1 + t * t
        upper.append(Point((1 - t * t) / s, 2 * t / s))
    return StarGeometry(tuple(upper + [-d for d in upper]))


def ray_param(d: Drawing, ray: int, a: Point, b: Point) -> Optional[Fraction]:
    """Parameter along a ray where segment ab properly crosses it, if it does."""
    geom: StarGeometry = d.lines  # type: ignore[assignment]
    direction = geom.direction(ray)
    sa, sb = direction.cross(a), direction.cross(b)
    if sa * sb >= 0:
        return None
    point = a + (b - a).scale(sa / (sa - sb))
    s = track_param(geom, ray, point)
    return s if s > 0 else None


def _line_hit(geom: StarGeometry, ray: int, p: Point, q: Point) -> Optional[Fraction]:
    """Parameter along the line of a ray where the line through p and q meets it."""
    direction = geom.direction(ray)
    sp, sq = direction.cross(p), direction.cross(q)
    if sp == sq:
        return None
    point = p + (q - p).scale(sp / (sp - sq))
    return track_param(geom, ray, point)


class _Layout:
    """Per-instance lookups shared by placement and the observation checks."""

    def __init__(self, rt: ReducedStarTriangulation):
        ag = rt.ag
        self.ag = ag
        self.n = ag.arr.n_tracks
        self.corners = {ag.edges[e][0] for e in ag.edges if is_separating(ag, e)}
        self.inner = {r: ag.vertices_on(r)[0] for r in range(self.n)}
        self.outer = {r: ag.vertices_on(r)[-1] for r in range(self.n)}
        self.comb_of: Dict[str, Tuple[int, str, str]] = {}
        for cell in range(self.n):
            for comb in combs(ag, cell):
                u1 = ag.edges[comb.inner][0] if comb.inner else self.inner[cell]
                u2 = ag.edges[comb.outer][0] if comb.outer else self.outer[cell]
                if u1 == u2 and comb.inner is None:
                    u1 = rt.origin
                for v in comb.vertices:
                    self.comb_of[v] = (cell, u1, u2)

    def corners_on(self, ray: int) -> List[str]:
        return [v for v in self.ag.vertices_on(ray) if v in self.corners]


def _place_free(lay: _Layout, d: Drawing, v: str) -> Point:
    geom: StarGeometry = d.lines  # type: ignore[assignment]
    cell, u1, u2 = lay.comb_of[v]
    nxt, prv = (cell + 1) % lay.n, (cell - 1) % lay.n
    c = d.coords
    m_next, r_next = c[lay.inner[nxt]], c[lay.outer[nxt]]
    m_prev, r_prev = c[lay.inner[prv]], c[lay.outer[prv]]
    p1, p2 = c[u1], c[u2]
    try:
        hs = [
            HalfPlane.side_of(m_next, p2, p1),
            HalfPlane.side_of(r_next, p1, p2),
            HalfPlane.side_of(m_prev, p1, p2),
            HalfPlane.side_of(r_prev, p2, p1),
        ] + cell_halfplanes(geom, cell)
    except ValueError as e:
        raise EmptyPlacementRegion(f"Corners around {v} are collinear", witness=v) from e
    region = polygon_from_halfplanes(hs)
    if region.kind is RegionKind.EMPTY:
        raise EmptyPlacementRegion(f"No room for {v} in cell {cell}", witness=v)
    try:
        return interior_point(region, hs)
    except ZeroArea as e:
        raise EmptyPlacementRegion(f"Placement region of {v} is degenerate", witness=v) from e


def _slot_ray(lay: _Layout, d: Drawing, ray: int, coords: Dict[str, Point]) -> None:
    """Give every non-corner on a ray a radius between its neighbouring items."""
    ag = lay.ag
    geom: StarGeometry = d.lines  # type: ignore[assignment]
    items = ag.orders[ray]
    known: List[Optional[Fraction]] = []
    for kind, ref in items:
        if kind == "v":
            known.append(track_param(geom, ray, coords[ref]) if ref in lay.corners else None)
            continue
        a, b = ag.edges[ref]
        s = ray_param(d, ray, coords[a], coords[b])
        if s is None:
            raise OrderingConflict(f"Edge {ref} misses ray {ray}", witness=(ray, ref))
        known.append(s)
    fixed = [s for s in known if s is not None]
    if any(x >= y for x, y in zip(fixed, fixed[1:])) or (fixed and fixed[0] <= 0):
        raise OrderingConflict(f"Items on ray {ray} come out of order", witness=ray)

    q = 0
    while q < len(items):
        if known[q] is not None:
            q += 1
            continue
        end = q
        while end < len(items) and known[end] is None:
            end += 1
        lo = known[q - 1] if q > 0 else Fraction(0)
        hi = known[end] if end < len(items) else lo + 1  # type: ignore[operator]
        gap = (hi - lo) / (end - q + 1)  # type: ignore[operator]
        for step, pos in enumerate(range(q, end), start=1):
            at = lo + gap * step  # type: ignore[operator]
            coords[items[pos][1]] = track_point(geom, ray, at)
        q = end


def draw_reduced_star(rt: ReducedStarTriangulation, geom: StarGeometry) -> Drawing:
    """
    Draw a reduced star triangulation on straight rays.

    Raises:
        EmptyPlacementRegion: If a free vertex has no admissible position
        OrderingConflict: If crossings on a ray come out in the wrong order
    """
    lay = _Layout(rt)
    coords: Dict[str, Point] = {rt.origin: ORIGIN}
    for r in range(lay.n):
        for radius, v in enumerate(lay.corners_on(r), start=1):
            coords[v] = track_point(geom, r, Fraction(radius))
    d = Drawing(geom, coords)
    for v in rt.ag.free_vertices():
        coords[v] = _place_free(lay, d, v)
    for r in range(lay.n):
        _slot_ray(lay, d, r, coords)
    return Drawing(geom, coords)


def check_observations(rt: ReducedStarTriangulation, d: Drawing) -> List[str]:
    """
    Geometric facts every free vertex of a drawn reduced triangulation should satisfy.

    Lines from the innermost and outermost vertex of the previous ray through a vertex
    meet its comb's source ray between the two comb corners; lines from the corners of
    the previous ray keep their order there; edges arriving from the previous cell
    cross the ray between the lines drawn from their own comb corners.
    """
    lay = _Layout(rt)
    geom: StarGeometry = d.lines  # type: ignore[assignment]
    c = d.coords
    ag = rt.ag
    problems: List[str] = []

    def between(s: Optional[Fraction], a: Fraction, b: Fraction) -> bool:
        return s is not None and min(a, b) < s < max(a, b)

    for v, (cell, u1, u2) in sorted(lay.comb_of.items()):
        prv = (cell - 1) % lay.n
        s1, s2 = track_param(geom, cell, c[u1]), track_param(geom, cell, c[u2])
        for q in (lay.inner[prv], lay.outer[prv]):
            if not between(_line_hit(geom, cell, c[q], c[v]), s1, s2):
                problems.append(f"line from {q} through {v} misses the comb on ray {cell}")
        hits = [_line_hit(geom, cell, c[x], c[v]) for x in lay.corners_on(prv)]
        rising = all(x < y for x, y in zip(hits, hits[1:]))  # type: ignore[operator]
        if any(h is None for h in hits) or not rising:
            problems.append(f"lines from ray {prv} through {v} change order on ray {cell}")
        for e in ag.graph.rotation[v]:
            w = ag.graph.other_end(e, v)
            if w not in lay.comb_of or lay.comb_of[w][0] != prv or not ag.crossings[e].crossings:
                continue
            _, w1, w2 = lay.comb_of[w]
            bounds = [_line_hit(geom, cell, c[x], c[v]) for x in (w1, w2)]
            s = ray_param(d, cell, c[w], c[v])
            if None in bounds or not between(s, bounds[0], bounds[1]):  # type: ignore[arg-type]
                problems.append(f"edge {e} crosses ray {cell} outside its window")
    return problems


def draw_ccw(
    ag: AlignedGraph,
    geom: Optional[StarGeometry] = None,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> Drawing:
    """
    Aligned drawing of a star instance of complexity at most (1,1,0).

    Raises:
        ReductionError: If the instance falls outside what the reduction handles
        DrawingError: If drawing or lifting fails
    """
    rt, plan = reduce_star(ag)
    geom = geom or make_star_geometry(ag.arr.size)
    reduced = draw_reduced_star(rt, geom)
    logger.info(f"drew reduced triangulation with {len(reduced.coords)} vertices")
    return lift_verified(ag, plan, reduced, max_halvings)
