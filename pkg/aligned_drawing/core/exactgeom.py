"""
Exact geometric predicates and LP feasibility.

Every computation here runs on Fractions. Nothing in this module rounds.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from aligned_drawing.exceptions import DegenerateSegment, ZeroArea
from aligned_drawing.models.geometry import (
    CrossKind,
    HalfPlane,
    LinSystem,
    LpResult,
    Orientation,
    Point,
    Region,
    RegionKind,
    Relation,
    SegmentCrossing,
)
from aligned_drawing.utils.logger import logger

Segment = Tuple[Point, Point]


def orient_value(p: Point, q: Point, r: Point) -> Fraction:
    """Determinant of (q - p, r - p)."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orient(p: Point, q: Point, r: Point) -> Orientation:
    """Return LEFT if r lies to the left of the directed line p -> q."""
    det = orient_value(p, q, r)
    if det > 0:
        return Orientation.LEFT
    if det < 0:
        return Orientation.RIGHT
    return Orientation.COLLINEAR


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    """p is collinear with a, b and lies inside their bounding box."""
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def line_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Optional[Point]:
    """Intersection of the infinite lines p1p2 and q1q2, or None if parallel."""
    d1 = p2 - p1
    d2 = q2 - q1
    denom = d1.cross(d2)
    if denom == 0:
        return None
    t = (q1 - p1).cross(d2) / denom
    return p1 + d1.scale(t)


def segment_cross(s1: Segment, s2: Segment) -> SegmentCrossing:
    """
    Classify two closed segments.

    Returns:
        PROPER with the point when the interiors cross, TOUCH with the point when they meet
        in a single point that is an endpoint of one of them, OVERLAP when collinear with a
        common sub-segment, NONE otherwise.

    Raises:
        DegenerateSegment: If a segment has equal endpoints
    """
    a, b = s1
    c, d = s2
    if a == b:
        raise DegenerateSegment(f"Segment has equal endpoints: {a}", witness=s1)
    if c == d:
        raise DegenerateSegment(f"Segment has equal endpoints: {c}", witness=s2)

    o1 = orient_value(a, b, c)
    o2 = orient_value(a, b, d)
    o3 = orient_value(c, d, a)
    o4 = orient_value(c, d, b)

    if o1 == 0 and o2 == 0:
        # collinear: project onto the dominant axis
        def key(p: Point) -> Tuple[Fraction, Fraction]:
            return (p.x, p.y)

        lo1, hi1 = sorted((a, b), key=key)
        lo2, hi2 = sorted((c, d), key=key)
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) > key(hi):
            return SegmentCrossing(CrossKind.NONE)
        if lo == hi:
            return SegmentCrossing(CrossKind.TOUCH, lo)
        return SegmentCrossing(CrossKind.OVERLAP)

    if o1 * o2 < 0 and o3 * o4 < 0:
        point = line_intersection(a, b, c, d)
        return SegmentCrossing(CrossKind.PROPER, point)

    for p, (e, f), value in ((c, (a, b), o1), (d, (a, b), o2), (a, (c, d), o3), (b, (c, d), o4)):
        if value == 0 and _on_segment(p, e, f):
            return SegmentCrossing(CrossKind.TOUCH, p)
    return SegmentCrossing(CrossKind.NONE)


def polygon_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area of a polygon (positive for ccw)."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        total += vertices[i].cross(vertices[(i + 1) % n])
    return total


def _normalize_polygon(vertices: List[Point]) -> List[Point]:
    """Drop repeated and collinear vertices, orient ccw, start at the lexicographic minimum."""
    pts: List[Point] = []
    for p in vertices:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()

    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if orient_value(prev, cur, nxt) == 0:
                pts.pop(i)
                changed = True
                break

    if len(pts) >= 3 and polygon_area2(pts) < 0:
        pts.reverse()
    if pts:
        start = pts.index(min(pts))
        pts = pts[start:] + pts[:start]
    return pts


def _clip(polygon: List[Point], h: HalfPlane) -> List[Point]:
    """Clip a convex polygon by the closure of h."""
    result: List[Point] = []
    n = len(polygon)
    for i in range(n):
        p = polygon[i]
        q = polygon[(i + 1) % n]
        vp = h.value(p)
        vq = h.value(q)
        if vp >= 0:
            result.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            result.append(p + (q - p).scale(t))
    return result


def default_bound(hs: Sequence[HalfPlane]) -> Fraction:
    """Four times the largest coordinate among pairwise boundary-line intersections (at least 4)."""
    biggest = Fraction(1)
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            h, g = hs[i], hs[j]
            det = h.a * g.b - h.b * g.a
            if det == 0:
                continue
            x = (h.b * g.c - g.b * h.c) / det
            y = (g.a * h.c - h.a * g.c) / det
            biggest = max(biggest, abs(x), abs(y))
        h = hs[i]
        if h.a != 0:
            biggest = max(biggest, abs(h.c / h.a))
        if h.b != 0:
            biggest = max(biggest, abs(h.c / h.b))
    return 4 * biggest


def polygon_from_halfplanes(hs: Sequence[HalfPlane], bound: Optional[Fraction] = None) -> Region:
    """
    Intersect half-planes exactly.

    Unbounded intersections are clipped to the box [-bound, bound]^2 and reported as
    UNBOUNDED with the clipped vertices. A region of zero area is EMPTY when any input
    half-plane is strict, otherwise a SEGMENT (its two ends) or a POINT.

    Args:
        hs: Half-planes to intersect (at least one)
        bound: Bounding box half-width; defaults to default_bound(hs)
    """
    if not hs:
        raise ValueError("polygon_from_halfplanes needs at least one half-plane")
    box = Fraction(bound) if bound is not None else default_bound(hs)
    polygon = [Point(-box, -box), Point(box, -box), Point(box, box), Point(-box, box)]
    for h in hs:
        polygon = _clip(polygon, h)
        if not polygon:
            return Region(RegionKind.EMPTY)

    vertices = _normalize_polygon(polygon)
    if len(vertices) < 3 or polygon_area2(vertices) == 0:
        if any(h.strict for h in hs) or not vertices:
            return Region(RegionKind.EMPTY)
        low, high = min(vertices), max(vertices)
        if low == high:
            return Region(RegionKind.POINT, [low])
        return Region(RegionKind.SEGMENT, [low, high])

    touches_box = any(abs(p.x) == box or abs(p.y) == box for p in vertices)
    kind = RegionKind.UNBOUNDED if touches_box else RegionKind.POLYGON
    return Region(kind, vertices)


def interior_point(
    poly: "Region | Sequence[Point]", halfplanes: Optional[Sequence[HalfPlane]] = None
) -> Point:
    """
    Average of the polygon vertices.

    Args:
        poly: Region or vertex list of a convex polygon
        halfplanes: Optional defining half-planes; each must hold strictly at the result

    Raises:
        ZeroArea: If the polygon is degenerate or the point misses a defining half-plane
    """
    vertices = list(poly.vertices) if isinstance(poly, Region) else list(poly)
    if len(vertices) < 3 or polygon_area2(vertices) == 0:
        raise ZeroArea(f"Polygon has zero area: {vertices}")
    n = len(vertices)
    point = Point(sum(p.x for p in vertices) / n, sum(p.y for p in vertices) / n)
    for h in halfplanes or ():
        if h.value(point) <= 0:
            raise ZeroArea(f"Interior point {point} is not strictly inside {h}", witness=h)
    return point


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    """
    Solve a square linear system exactly by Gauss-Jordan elimination.

    Raises:
        ZeroArea: If the matrix is singular
    """
    n = len(matrix)
    rows = [[Fraction(v) for v in matrix[i]] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ZeroArea(f"Singular linear system at column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


class _Phase1Tableau:
    """Phase-1 simplex tableau with Bland's rule over non-negative columns."""

    def __init__(self, a: List[List[Fraction]], b: List[Fraction]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        # artificial columns n .. n+m-1 start in the basis
        self.rows = [
            a[i] + [Fraction(1) if j == i else Fraction(0) for j in range(self.m)] + [b[i]]
            for i in range(self.m)
        ]
        self.basis = [self.n + i for i in range(self.m)]
        self.cost = [Fraction(0)] * self.n + [Fraction(1)] * self.m

    def reduced_costs(self) -> List[Fraction]:
        width = self.n + self.m
        d = list(self.cost)
        for i, bvar in enumerate(self.basis):
            cb = self.cost[bvar]
            if cb:
                row = self.rows[i]
                for j in range(width):
                    d[j] -= cb * row[j]
        return d

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [v / piv for v in row]
        for k in range(self.m):
            if k != i and self.rows[k][j] != 0:
                f = self.rows[k][j]
                self.rows[k] = [a - f * b for a, b in zip(self.rows[k], row)]
        self.basis[i] = j

    def objective(self) -> Fraction:
        terms = (self.cost[bv] * self.rows[i][-1] for i, bv in enumerate(self.basis))
        return sum(terms, Fraction(0))

    def run(self) -> Fraction:
        while True:
            d = self.reduced_costs()
            entering = next((j for j in range(self.n + self.m) if d[j] < 0), None)
            if entering is None:
                return self.objective()
            best: Optional[Tuple[Fraction, int, int]] = None
            for i in range(self.m):
                coef = self.rows[i][entering]
                if coef > 0:
                    cand = (self.rows[i][-1] / coef, self.basis[i], i)
                    if best is None or cand < best:
                        best = cand
            if best is None:
                # phase-1 objective is bounded below by zero
                return self.objective()
            self.pivot(best[2], entering)

    def value(self, column: int) -> Fraction:
        for i, bv in enumerate(self.basis):
            if bv == column:
                return self.rows[i][-1]
        return Fraction(0)


def _solve_phase1(system: LinSystem) -> Optional[List[Fraction]]:
    """Return a feasible assignment or None."""
    nv = system.variables
    ge_rows = [i for i, r in enumerate(system.rows) if r.relation is Relation.GE]
    n_slack = len(ge_rows)
    width = 2 * nv + n_slack
    a: List[List[Fraction]] = []
    b: List[Fraction] = []
    for idx, row in enumerate(system.rows):
        coeffs = [Fraction(c) for c in row.coefficients]
        line = coeffs + [-c for c in coeffs] + [Fraction(0)] * n_slack
        if row.relation is Relation.GE:
            line[2 * nv + ge_rows.index(idx)] = Fraction(-1)
        rhs = Fraction(row.rhs)
        if rhs < 0:
            line = [-v for v in line]
            rhs = -rhs
        a.append(line)
        b.append(rhs)

    if not a:
        return [Fraction(0)] * nv
    tableau = _Phase1Tableau(a, b)
    if tableau.run() != 0:
        return None
    values = [tableau.value(j) for j in range(width)]
    return [values[j] - values[nv + j] for j in range(nv)]


def lp_feasible(system: LinSystem) -> LpResult:
    """
    Decide feasibility of a linear system over free variables.

    Phase-1 simplex with Bland's rule on the split x = x+ - x-. An infeasible system
    yields an irreducible infeasible row subset found by a deletion filter.
    """
    assignment = _solve_phase1(system)
    if assignment is not None:
        for i, row in enumerate(system.rows):
            if not row.satisfied_by(assignment):
                raise ArithmeticError(f"Simplex produced an assignment violating row {i}")
        logger.debug(f"LP feasible ({system.variables} vars, {len(system.rows)} rows)")
        return LpResult(True, assignment=assignment)

    keep = list(range(len(system.rows)))
    for idx in list(keep):
        trial = [i for i in keep if i != idx]
        if _solve_phase1(system.subsystem(trial)) is None:
            keep = trial
    logger.debug(f"LP infeasible; witness rows {keep}")
    return LpResult(False, witness=keep)
