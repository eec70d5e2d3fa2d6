"""
Straight-line drawing of parallel instances.

Once every vertex sits on a layer, only x-coordinates are left to choose. Each crossing
of an edge with a layer is an affine combination of its endpoints' x-coordinates, so
keeping the items of every layer in order is a linear feasibility problem.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from aligned_drawing.core.exactgeom import lp_feasible
from aligned_drawing.core.lifting import DEFAULT_MAX_HALVINGS, lift_verified
from aligned_drawing.core.reduce_parallel import reduce_parallel
from aligned_drawing.exceptions import DrawingError, LpInfeasible, PreconditionFailed
from aligned_drawing.models.aligned import AlignedGraph, Item
from aligned_drawing.models.drawing import Drawing, ParallelGeometry
from aligned_drawing.models.geometry import LinSystem, Point, RatLike, Relation, to_rat
from aligned_drawing.models.plan import DropInsertedPseudolines, LiftPlan
from aligned_drawing.utils.logger import logger

DEFAULT_GAP = Fraction(1)


def layer_heights(original: Sequence[int], size: int) -> List[Fraction]:
    """
    Heights for an enlarged layer set.

    Original layer j sits at height j. A run of q inserted layers between two original ones
    is spread over dyadic fractions of the gap; runs below the first or above the last
    original layer use a unit gap.
    """
    ys: List[Optional[Fraction]] = [None] * size
    for j, idx in enumerate(original):
        ys[idx] = Fraction(j)
    if not original:
        return [Fraction(i) for i in range(size)]
    q = 0
    while q < size:
        if ys[q] is not None:
            q += 1
            continue
        end = q
        while end < size and ys[end] is None:
            end += 1
        count = end - q
        lo = ys[q - 1] if q > 0 else ys[end] - 1  # type: ignore[operator]
        hi = ys[end] if end < size else lo + 1  # type: ignore[operator]
        denom = 1 << count.bit_length()
        for step in range(1, count + 1):
            ys[q + step - 1] = lo + (hi - lo) * Fraction(step, denom)  # type: ignore[operator]
        q = end
    return ys  # type: ignore[return-value]


def original_layers(plan: LiftPlan, size: int) -> List[int]:
    """Indices, in the final layer set, of the layers the plan started from."""
    index: Optional[List[int]] = None
    for step in plan.of_type(DropInsertedPseudolines):
        kept = list(step.original)  # type: ignore[union-attr]
        index = kept if index is None else [kept[i] for i in index]
    return index if index is not None else list(range(size))


def _item_expression(
    ag: AlignedGraph, item: Item, layer: int, ys: Sequence[Fraction], column: Dict[str, int]
) -> Dict[int, Fraction]:
    kind, ref = item
    if kind == "v":
        return {column[ref]: Fraction(1)}
    a, b = ag.edges[ref]
    ya, yb = ys[ag.placement[a].index], ys[ag.placement[b].index]  # type: ignore[index]
    lam = (ys[layer] - ya) / (yb - ya)
    expr = {column[a]: 1 - lam}
    expr[column[b]] = expr.get(column[b], Fraction(0)) + lam
    return expr


def straighten_parallel(
    ag: AlignedGraph, layer_ys: Optional[Sequence[RatLike]] = None, gap: RatLike = DEFAULT_GAP
) -> Drawing:
    """
    Draw an instance whose vertices all lie on layers.

    Aligned edges join consecutive items of a layer, so the layer orders already place them.

    Args:
        ag: Parallel instance without free vertices
        layer_ys: Strictly increasing layer heights (default 0, 1, 2, ...)
        gap: Least horizontal distance between consecutive items of a layer

    Raises:
        PreconditionFailed: If a vertex is free or the heights do not increase
        LpInfeasible: If no x-coordinates keep every layer in order
    """
    if ag.arr.is_star:
        raise PreconditionFailed("Straightening needs a parallel instance")
    ys = [to_rat(y) for y in (layer_ys if layer_ys is not None else range(ag.arr.size))]
    if len(ys) != ag.arr.size or any(a >= b for a, b in zip(ys, ys[1:])):
        raise PreconditionFailed(f"Layer heights {ys} do not increase over {ag.arr.size} layers")
    free = ag.free_vertices()
    if free:
        raise PreconditionFailed(f"Free vertices remain: {free}", witness=free)

    column = {v: i for i, v in enumerate(ag.vertices)}
    system = LinSystem(len(column))
    min_gap = to_rat(gap)
    for layer in range(ag.arr.size):
        exprs = [_item_expression(ag, it, layer, ys, column) for it in ag.orders[layer]]
        for left, right in zip(exprs, exprs[1:]):
            row = [Fraction(0)] * len(column)
            for i, c in right.items():
                row[i] += c
            for i, c in left.items():
                row[i] -= c
            system.add(row, min_gap, Relation.GE)
    result = lp_feasible(system)
    if not result.feasible:
        rows = result.witness or []
        raise LpInfeasible(
            f"Layer orders admit no straight-line drawing ({len(rows)} conflicting rows)",
            witness=rows,
        )
    xs = result.assignment or []
    coords = {}
    for v, i in column.items():
        coords[v] = Point(xs[i], ys[ag.placement[v].index])  # type: ignore[index]
    logger.debug(f"straightened {len(coords)} vertices on {len(ys)} layers")
    return Drawing(ParallelGeometry(tuple(ys)), coords)


def _draw_reduced(
    ag: AlignedGraph, gap: RatLike, max_halvings: int, contract: bool
) -> Tuple[Drawing, List[Fraction]]:
    reduced, plan = reduce_parallel(ag, contract)
    kept = original_layers(plan, reduced.arr.size)
    ys = layer_heights(kept, reduced.arr.size)
    drawing = straighten_parallel(reduced, ys, gap)
    logger.info(f"straightened reduced instance on {reduced.arr.size} layers")
    lifted = lift_verified(ag, plan, drawing, max_halvings)
    original = set(kept)
    return lifted, [y for i, y in enumerate(ys) if i not in original]


def draw_parallel_with_guides(
    ag: AlignedGraph, gap: RatLike = DEFAULT_GAP, max_halvings: int = DEFAULT_MAX_HALVINGS
) -> Tuple[Drawing, List[Fraction]]:
    """
    Aligned drawing of a parallel instance plus the heights of the layers it inserted.

    If the contracted instance cannot be drawn and lifted, the instance is drawn again
    without contracting anything; every free vertex then gets a layer of its own.

    Raises:
        DegenerateParallelEdge: If an edge leaves a layer and returns to it
        ReductionError: If the reduction gets stuck
        DrawingError: If straightening or lifting fails
    """
    try:
        return _draw_reduced(ag, gap, max_halvings, contract=True)
    except DrawingError as e:
        logger.warning(f"contracted instance failed to draw ({e}), drawing without contracting")
    return _draw_reduced(ag, gap, max_halvings, contract=False)


def draw_parallel(
    ag: AlignedGraph, gap: RatLike = DEFAULT_GAP, max_halvings: int = DEFAULT_MAX_HALVINGS
) -> Drawing:
    """Aligned drawing of a parallel instance; see draw_parallel_with_guides."""
    return draw_parallel_with_guides(ag, gap, max_halvings)[0]
