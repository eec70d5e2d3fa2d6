"""
Reduction of parallel instances.

Free and aligned edges are contracted first where that keeps the instance valid. Every
remaining free vertex then gets a layer of its own: the new layer hugs a boundary layer
of the vertex's cell, crossing the edges that leave that layer, and detours through the
vertex where it meets it.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from aligned_drawing.core.aligned_model import build_aligned, classify_edge
from aligned_drawing.core.planarization import PEdgeKind, Planarization
from aligned_drawing.core.reduce_star import contract_edge
from aligned_drawing.exceptions import (
    AlignedError,
    ComplexityExceeded,
    DegenerateParallelEdge,
    PreconditionFailed,
)
from aligned_drawing.models.aligned import (
    AlignedGraph,
    Arrangement,
    Crossing,
    CrossingSpec,
    EdgeKind,
    Item,
    Placement,
)
from aligned_drawing.models.embedding import Dart
from aligned_drawing.models.plan import DropInsertedPseudolines, LiftPlan
from aligned_drawing.utils.logger import logger


def check_parallel(ag: AlignedGraph) -> None:
    """
    Raises:
        ComplexityExceeded: If ag is not a parallel instance
        DegenerateParallelEdge: If a non-aligned edge has both ends on one layer
    """
    if ag.arr.is_star:
        raise ComplexityExceeded("The parallel pipeline needs a parallel arrangement")
    for e, (a, b) in ag.edges.items():
        if ag.crossings[e].aligned:
            continue
        pa, pb = ag.placement[a], ag.placement[b]
        if pa.on_track and pb.on_track and pa.index == pb.index:
            raise DegenerateParallelEdge(
                f"Edge {e} leaves layer {pa.index} and comes back to it", witness=e
            )


def contract_free_elements(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """Contract free and aligned edges until none can be contracted."""
    plan = LiftPlan()
    changed = True
    while changed:
        changed = False
        for e in sorted(ag.edges):
            if e not in ag.edges:
                continue
            kind = classify_edge(ag, e).kind
            if kind is EdgeKind.OTHER:
                continue
            a, _ = ag.edges[e]
            track = ag.placement[a].index if kind is EdgeKind.ALIGNED else None
            done = contract_edge(ag, e, a, track)
            if done is None:
                logger.debug(f"edge {e} does not contract")
                continue
            ag, step = done
            plan.append(step)
            changed = True
    return ag, plan


@dataclass
class _Hug:
    """
    Faces met by a curve running just beside a layer, west to east.

    pieces[i] separates faces[i] from faces[i + 1]; darts[i] is the dart whose left face
    is faces[i] at the point where the curve enters it.
    """

    layer: int
    above: bool
    faces: List[int] = field(default_factory=list)
    darts: List[Dart] = field(default_factory=list)
    pieces: List[str] = field(default_factory=list)

    @property
    def cell(self) -> int:
        return self.layer + 1 if self.above else self.layer


@dataclass
class _Route:
    vertex: str
    crossed: List[str]
    after: int
    enclosed: Set[str]


def _layer_segs(p: Planarization, node: str, layer: int) -> Tuple[str, str]:
    out, inc = "", ""
    for eid in p.rs.rot[node]:
        pe = p.pedges[eid]
        if pe.kind is PEdgeKind.SEG and pe.track == layer:
            if p.rs.edges[eid][0] == node:
                out = eid
            else:
                inc = eid
    return out, inc


def _hug(p: Planarization, fi: Dict[Dart, int], layer: int, above: bool) -> _Hug:
    hug = _Hug(layer, above)
    chain = p.track_chain(layer)
    first_out, _ = _layer_segs(p, chain[0], layer)
    if above:
        start = (first_out, chain[0])
    else:
        start = (_layer_segs(p, chain[1], layer)[1], chain[1])
    hug.faces.append(fi[start])
    hug.darts.append(start)
    for node in chain[1:-1]:
        s_out, s_in = _layer_segs(p, node, layer)
        rot = p.rs.rot[node]
        i = rot.index(s_out)
        turned = rot[i:] + rot[:i]
        j = turned.index(s_in)
        left, right = turned[1:j], turned[j + 1 :]
        if above:
            steps = [
                (left[q], (left[q - 1], node) if q else (s_out, node))
                for q in reversed(range(len(left)))
            ]
        else:
            steps = [(piece, (piece, node)) for piece in right]
        for piece, dart in steps:
            hug.pieces.append(piece)
            hug.darts.append(dart)
            hug.faces.append(fi[dart])
    return hug


def _enclosed(
    p: Planarization,
    fi: Dict[Dart, int],
    faces: List[List[Dart]],
    hug: _Hug,
    v: str,
    a: int,
    b: int,
) -> Set[str]:
    """
    Free vertices cut off between the guide and a detour through v.

    The detour leaves the hug along pieces[a] and comes back along pieces[b - 1], both
    incident to v; the region it cuts off starts at faces[a + 1 : b].
    """
    if b - a < 2:
        return set()
    rims = {hug.pieces[a], hug.pieces[b - 1]}
    todo = list(hug.faces[a + 1 : b])
    seen: Set[int] = set()
    while todo:
        f = todo.pop()
        if f in seen:
            continue
        seen.add(f)
        for eid, tail in faces[f]:
            if eid in rims or p.pedges[eid].kind is not PEdgeKind.PIECE:
                continue
            g = fi[(eid, p.rs.other_end(eid, tail))]
            if g not in seen:
                todo.append(g)
    nodes = {tail for f in seen for _, tail in faces[f]}
    return {x for x in nodes if x != v and p.is_real(x) and p.track_of(x) is None}


def _routes(
    ag: AlignedGraph, p: Planarization, faces: List[List[Dart]], fi: Dict[Dart, int], hug: _Hug
) -> List[_Route]:
    """
    Candidate detours through free vertices of the hugged cell.

    A vertex with pieces down to the guide is met between its first and last such piece;
    a vertex that only lies on a hugged face is touched from inside that face. Detours of
    the first kind come first, each group west to east.
    """
    ends = [set(p.rs.edges[piece]) for piece in hug.pieces]
    tails = [{tail for _, tail in faces[f]} for f in hug.faces]
    direct: List[_Route] = []
    touching: List[_Route] = []
    for v in ag.free_vertices():
        if ag.placement[v].index != hug.cell:
            continue
        own = [i for i, nodes in enumerate(ends) if v in nodes]
        if own:
            a, b = own[0], own[-1] + 1
            crossed = [p.pedges[c].g_edge for c in hug.pieces[:a] + hug.pieces[b:]]
            enclosed = _enclosed(p, fi, faces, hug, v, a, b)
            direct.append(_Route(v, crossed, a, enclosed))  # type: ignore[arg-type]
            continue
        everything = [p.pedges[c].g_edge for c in hug.pieces]
        for i, nodes in enumerate(tails):
            if v in nodes:
                touching.append(_Route(v, everything, i, set()))  # type: ignore[arg-type]
    direct.sort(key=lambda r: (r.after, r.vertex))
    touching.sort(key=lambda r: (r.after, r.vertex))
    return direct + touching


def _shifted(
    ag: AlignedGraph, new_layer: int
) -> Tuple[Dict[str, CrossingSpec], Dict[int, Tuple[Item, ...]]]:
    def track(t: int) -> int:
        return t + 1 if t >= new_layer else t

    crossings = {
        e: CrossingSpec(tuple(Crossing(track(c.track)) for c in s.crossings), s.aligned)
        for e, s in ag.crossings.items()
    }
    orders = {track(t): items for t, items in ag.orders.items()}
    return crossings, orders


def _with_layer(ag: AlignedGraph, hug: _Hug, route: _Route) -> AlignedGraph:
    cell = new_layer = hug.cell
    crossings, orders = _shifted(ag, new_layer)
    inside, outside = (cell, cell + 1) if hug.above else (cell + 1, cell)
    placement: Dict[str, Placement] = {}
    for x, pl in ag.placement.items():
        i: int = pl.index  # type: ignore[assignment]
        if pl.on_track:
            placement[x] = Placement.on_layer(i + 1 if i >= new_layer else i)
        elif i != cell:
            placement[x] = Placement.in_cell(i + 1 if i > cell else i)
        elif x == route.vertex:
            placement[x] = Placement.on_layer(new_layer)
        else:
            placement[x] = Placement.in_cell(inside if x in route.enclosed else outside)
    for e in route.crossed:
        spec = crossings[e]
        items = list(spec.crossings)
        items.insert(ag.cells[e].index(cell), Crossing(new_layer))
        crossings[e] = CrossingSpec(tuple(items), spec.aligned)
    before = [("x", e) for e in route.crossed[: route.after]]
    after = [("x", e) for e in route.crossed[route.after :]]
    orders[new_layer] = tuple(before + [("v", route.vertex)] + after)
    arr = Arrangement.parallel(ag.arr.size + 1)
    return build_aligned(ag.graph, arr, placement, crossings, orders)


def touches_layers(ag: AlignedGraph) -> bool:
    return any(pl.on_track for pl in ag.placement.values()) or any(
        s.crossings for s in ag.crossings.values()
    )


def layer_under_floating(ag: AlignedGraph) -> Tuple[AlignedGraph, int]:
    """
    Put a new layer under a graph that avoids every layer, through one of its outer vertices.

    Returns:
        The enlarged instance and the index of the new layer

    Raises:
        PreconditionFailed: If no outer vertex can carry the layer
    """
    cell: int = ag.placement[ag.vertices[0]].index  # type: ignore[assignment]
    crossings, orders = _shifted(ag, cell)
    outer = ag.graph.outer_face.vertices if ag.graph.outer_face else list(ag.vertices)
    arr = Arrangement.parallel(ag.arr.size + 1)
    last: Optional[AlignedError] = None
    for x in dict.fromkeys(outer):
        placement = {
            y: Placement.on_layer(cell) if y == x else Placement.in_cell(cell + 1)
            for y in ag.vertices
        }
        try:
            layered = build_aligned(
                ag.graph, arr, placement, crossings, {**orders, cell: (("v", x),)}
            )
            return layered, cell
        except AlignedError as e:
            last = e
    raise PreconditionFailed(f"No outer vertex carries a new layer: {last}")


def _insert_one(ag: AlignedGraph) -> Tuple[AlignedGraph, int]:
    p = Planarization.from_aligned(ag)
    faces = p.faces()
    fi = {d: i for i, f in enumerate(faces) for d in f}
    m = ag.arr.size
    occupied: Set[int] = {ag.placement[v].index for v in ag.free_vertices()}  # type: ignore[misc]
    for cell in sorted(occupied):
        guides = [(cell - 1, True)] if cell > 0 else []
        if cell < m:
            guides.append((cell, False))
        for layer, above in guides:
            hug = _hug(p, fi, layer, above)
            for route in _routes(ag, p, faces, fi, hug):
                try:
                    return _with_layer(ag, hug, route), hug.cell
                except AlignedError as e:
                    logger.debug(f"layer through {route.vertex} beside {layer} rejected: {e}")
    raise PreconditionFailed("No free vertex admits a new layer", witness=ag.free_vertices())


def _insert_all(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    plan = LiftPlan()
    original: List[int] = list(range(ag.arr.size))
    while ag.free_vertices():
        ag, new_layer = _insert_one(ag)
        original = [t + 1 if t >= new_layer else t for t in original]
        logger.debug(f"inserted layer {new_layer}, {len(ag.free_vertices())} free vertices left")
    if len(original) != ag.arr.size:
        plan.append(DropInsertedPseudolines(tuple(original), ag.arr.size))
    return ag, plan


def insert_pseudolines(ag: AlignedGraph, strict: bool = True) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Put every free vertex on a new layer of its own.

    Each new layer hugs a boundary layer of the vertex's cell and detours through the
    vertex. With strict=False free and aligned edges are carried over unchanged.

    Raises:
        PreconditionFailed: If strict and a free or aligned edge remains, or if no layer
            can be routed
    """
    check_parallel(ag)
    if strict:
        left = [e for e in ag.edges if classify_edge(ag, e).kind is not EdgeKind.OTHER]
        if left:
            raise PreconditionFailed(f"Free or aligned edges remain: {left}", witness=left)
    return _insert_all(ag)


def reduce_parallel(ag: AlignedGraph, contract: bool = True) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Reduce a parallel instance to one whose vertices all lie on layers.

    Args:
        ag: Parallel instance
        contract: Contract free and aligned edges before inserting layers

    Raises:
        DegenerateParallelEdge: If an edge leaves a layer and returns to it
        PreconditionFailed: If no layer can be routed through a free vertex
    """
    check_parallel(ag)
    plan = LiftPlan()
    if not touches_layers(ag):
        size = ag.arr.size
        ag, layer = layer_under_floating(ag)
        original = tuple(t + 1 if t >= layer else t for t in range(size))
        plan.append(DropInsertedPseudolines(original, size + 1))
    if contract:
        ag, sub = contract_free_elements(ag)
        plan.extend(sub)
    ag, sub = insert_pseudolines(ag, strict=False)
    plan.extend(sub)
    logger.info(f"reduced to {len(ag.vertices)} vertices on {ag.arr.size} layers")
    return ag, plan
