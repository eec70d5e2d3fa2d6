"""
Replay of lift plans: turning a drawing of a reduced instance into one of the input.

Steps are undone last to first. Gadget steps just forget coordinates; separating
triangles come back with a barycentric embedding; contracted vertices are pushed off
their survivor along a direction found by local verification.
"""

from fractions import Fraction
from typing import List

from aligned_drawing.core.arrangement import track_direction
from aligned_drawing.core.exactgeom import solve_linear
from aligned_drawing.core.verifier import verify_aligned, verify_local
from aligned_drawing.exceptions import LiftFailed, ZeroArea
from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.drawing import Drawing, ParallelGeometry
from aligned_drawing.models.geometry import Point
from aligned_drawing.models.plan import (
    DropInsertedPseudolines,
    DropOriginGadget,
    DropOuterCycle,
    LiftPlan,
    LiftStep,
    ReinsertSubgraph,
    RemoveGadget,
    RestoreSeparatingEdge,
    Uncontract,
)
from aligned_drawing.utils.logger import logger

DEFAULT_MAX_HALVINGS = 40

FIXED_DIRECTIONS = [
    Point(x, y)
    for x, y in [
        (1, 0), (3, 1), (1, 1), (1, 3), (0, 1), (-1, 3), (-1, 1), (-3, 1),
        (-1, 0), (-3, -1), (-1, -1), (-1, -3), (0, -1), (1, -3), (1, -1), (3, -1),
    ]
]  # fmt: skip


def _unit(v: Point) -> Point:
    return v.scale(Fraction(1) / (abs(v.x) + abs(v.y)))


def bisector_ccw(a: Point, b: Point) -> Point:
    """A direction strictly inside the counterclockwise sweep from a to b."""
    a, b = _unit(a), _unit(b)
    c = a.cross(b)
    if c > 0:
        return a + b
    if c < 0:
        return -(a + b)
    if a.dot(b) > 0:
        return -a
    return Point(-a.y, a.x)


def _candidates(step: Uncontract, d: Drawing) -> List[Point]:
    before = step.before
    u, v = step.survivor, step.removed
    pu = d.coords[u]
    if step.track is not None:
        direction = track_direction(d.lines, step.track)
        items = before.orders[step.track]
        outward = items.index(("v", v)) > items.index(("v", u))
        return [direction if outward else -direction]

    rot = list(before.graph.rotation[v])
    k = rot.index(step.record.contracted_edge)
    fan = [before.graph.other_end(e, v) for e in rot[k + 1 :] + rot[:k]]
    dirs = [_unit(d.coords[w] - pu) for w in fan if d.coords[w] != pu]
    result: List[Point] = []
    if dirs:
        result.append(bisector_ccw(dirs[0], dirs[-1]))
    around = [
        _unit(d.coords[w] - pu) for w in before.graph.neighbors(u) if w != v and w in d.coords
    ]
    for a, b in zip(around, around[1:] + around[:1]):
        result.append(bisector_ccw(a, b))
    for n in dirs:
        perp = Point(-n.y, n.x).scale(Fraction(1, 8))
        result.extend([n + perp, n - perp])
    result.extend(FIXED_DIRECTIONS)
    return result


def _start_epsilon(d: Drawing, u: str) -> Fraction:
    pu = d.coords[u]
    dists = [abs(p.x - pu.x) + abs(p.y - pu.y) for w, p in d.coords.items() if w != u]
    dists = [x for x in dists if x > 0]
    return min(dists) / 4 if dists else Fraction(1)


def place_uncontracted(step: Uncontract, d: Drawing, max_halvings: int) -> Drawing:
    """
    Put the removed vertex of a contraction next to its survivor.

    Raises:
        LiftFailed: If no candidate direction and distance passes local verification
    """
    u, v = step.survivor, step.removed
    pu = d.coords[u]
    start = _start_epsilon(d, u)
    for direction in _candidates(step, d):
        eps = start
        for _ in range(max_halvings):
            trial = d.with_point(v, pu + direction.scale(eps))
            if verify_local(step.before, trial, v) and verify_local(step.before, trial, u):
                return trial
            eps /= 2
    raise LiftFailed(f"No valid position for {v} next to {u}", witness=v)


def reinsert_subgraph(
    step: ReinsertSubgraph, d: Drawing, max_halvings: int = DEFAULT_MAX_HALVINGS
) -> Drawing:
    """
    Put back the interior of a separating triangle.

    A collapsed interior is lifted by its own plan inside the drawn triangle; a split-off
    one goes to barycentres of its neighbours.
    """
    if step.plan is not None:
        logger.debug(f"replaying {len(step.plan)} steps inside {step.triangle}")
        return lift(step.plan, d, max_halvings)
    if step.inner is None:
        raise LiftFailed(f"Nothing to put back inside {step.triangle}")
    inner = step.inner.graph
    corners = set(step.triangle)
    interior = [v for v in inner.vertices if v not in corners]
    index = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    matrix: List[List[Fraction]] = []
    rx: List[Fraction] = []
    ry: List[Fraction] = []
    for v in interior:
        row = [Fraction(0)] * n
        nbrs = inner.neighbors(v)
        row[index[v]] = Fraction(len(nbrs))
        bx, by = Fraction(0), Fraction(0)
        for w in nbrs:
            if w in index:
                row[index[w]] -= 1
            else:
                bx += d.coords[w].x
                by += d.coords[w].y
        matrix.append(row)
        rx.append(bx)
        ry.append(by)
    try:
        xs, ys = solve_linear(matrix, rx), solve_linear(matrix, ry)
    except ZeroArea as e:
        raise LiftFailed(f"Barycentric system for {step.triangle} is singular") from e
    coords = dict(d.coords)
    for v, x, y in zip(interior, xs, ys):
        coords[v] = Point(x, y)
    return Drawing(d.lines, coords)


def apply_step(step: LiftStep, d: Drawing, max_halvings: int = DEFAULT_MAX_HALVINGS) -> Drawing:
    if isinstance(step, (RemoveGadget, DropOuterCycle, DropOriginGadget)):
        return d.without(step.vertices)
    if isinstance(step, RestoreSeparatingEdge):
        return d.without((step.w1, step.w2))
    if isinstance(step, ReinsertSubgraph):
        return reinsert_subgraph(step, d, max_halvings)
    if isinstance(step, Uncontract):
        return place_uncontracted(step, d, max_halvings)
    if isinstance(step, DropInsertedPseudolines):
        lines = d.lines
        if not isinstance(lines, ParallelGeometry) or lines.m != step.size:
            raise LiftFailed("Drawing does not use the enlarged layer set")
        return Drawing(ParallelGeometry(tuple(lines.ys[i] for i in step.original)), dict(d.coords))
    raise TypeError(f"Unknown lift step {type(step).__name__}")


def lift(plan: LiftPlan, d: Drawing, max_halvings: int = DEFAULT_MAX_HALVINGS) -> Drawing:
    """Undo a lift plan on a drawing of the reduced instance."""
    for step in reversed(plan.steps):
        d = apply_step(step, d, max_halvings)
    logger.debug(f"lifted {len(plan)} steps")
    return d


def lift_verified(
    ag: AlignedGraph,
    plan: LiftPlan,
    d: Drawing,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> Drawing:
    """
    Lift and check the result against the original instance.

    Raises:
        LiftFailed: If a step fails or the lifted drawing does not verify
    """
    lifted = lift(plan, d, max_halvings).restricted(ag.vertices)
    report = verify_aligned(ag, lifted, stop_at_first=True)
    if not report.passed:
        failure = report.first_failure
        raise LiftFailed(
            f"Lifted drawing fails the {failure.prop} check",  # type: ignore[union-attr]
            witness=failure.witness,  # type: ignore[union-attr]
        )
    return lifted
