"""
Reduction of a counterclockwise star instance to a reduced star triangulation.

The public steps each return a new instance together with the lift plan that undoes
them on drawings. reduce_star runs them all; the planarization-level stages live in
star_gadgets.
"""

from typing import Dict, List, Optional, Set, Tuple

from aligned_drawing.core.aligned_model import (
    build_aligned,
    classify_edge,
    combs,
    orient_ccw,
    restrict,
    structure_check,
)
from aligned_drawing.core.planar import RotationSystem, cycle_sides, separating_triangles
from aligned_drawing.core.planarization import NodeKind, PNode, Planarization
from aligned_drawing.core.star_gadgets import StarReduction, tail_index
from aligned_drawing.exceptions import (
    AlignedError,
    ComplexityExceeded,
    DegenerateEdge,
    EmbeddingError,
    OriginUnsupported,
    PreconditionFailed,
    UnsupportedNesting,
)
from aligned_drawing.models.aligned import AlignedGraph, CrossingSpec, EdgeKind, Placement
from aligned_drawing.models.plan import (
    LiftPlan,
    ReducedStarTriangulation,
    ReinsertSubgraph,
    RemoveGadget,
    RestoreSeparatingEdge,
    Uncontract,
)
from aligned_drawing.utils.logger import logger


def prepare_star(ag: AlignedGraph) -> AlignedGraph:
    """
    Orient a star instance counterclockwise and reject inputs the reduction cannot take.

    Raises:
        ComplexityExceeded: If ag is not a star instance of complexity at most (1,1,0)
        DegenerateEdge: If a non-aligned edge joins two vertices of one pseudoline
        OriginUnsupported: If the origin vertex has a non-aligned edge
    """
    if not ag.arr.is_star:
        raise ComplexityExceeded("The star pipeline needs a star arrangement")
    ag = orient_ccw(ag)
    o = ag.origin_vertex()
    for e, (a, b) in ag.edges.items():
        if ag.crossings[e].aligned:
            continue
        if o in (a, b):
            raise OriginUnsupported(f"Edge {e} at the origin vertex is not aligned", witness=e)
        pa, pb = ag.placement[a], ag.placement[b]
        if pa.on_track and pb.on_track:
            if ag.arr.line_of(pa.index) == ag.arr.line_of(pb.index):  # type: ignore[arg-type]
                raise DegenerateEdge(f"Edge {e} joins two vertices of one pseudoline", witness=e)
    return ag


def _fresh(ag: AlignedGraph, prefix: str) -> str:
    taken = set(ag.vertices) | set(ag.edges)
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def anchor_floating(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """Tie a graph that avoids every track to the right boundary ray of its cell."""
    plan = LiftPlan()
    touches = any(not p.is_free for p in ag.placement.values()) or any(
        s.crossings for s in ag.crossings.values()
    )
    if touches or not ag.edges:
        return ag, plan
    cell = ag.placement[ag.vertices[0]].index
    rs = RotationSystem.from_graph(ag.graph)
    face = rs.trace(ag.graph.outer)  # type: ignore[arg-type]
    vid, eid = _fresh(ag, "~f"), _fresh(ag, "~fe")
    rs.add_pendant(eid, vid, face, 0)
    placement = {v: p.unranked() for v, p in ag.placement.items()}
    placement[vid] = Placement.on_ray(cell)  # type: ignore[arg-type]
    crossings = dict(ag.crossings)
    crossings[eid] = CrossingSpec()
    orders = dict(ag.orders)
    orders[cell] = (("v", vid),)  # type: ignore[index]
    anchored = build_aligned(rs.freeze(), ag.arr, placement, crossings, orders)
    plan.append(RemoveGadget((vid,), (eid,), "anchor"))
    logger.debug(f"anchored a floating graph in cell {cell} at {vid}")
    return orient_ccw(anchored), plan


def _stage(ag: AlignedGraph, run) -> Tuple[AlignedGraph, LiftPlan]:
    red = StarReduction(orient_ccw(ag))
    run(red)
    return red.to_aligned(), red.plan


def gadget_separating_edges(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """Replace every separating edge by a quadrangle; the result has complexity (1,0,bot)."""
    return _stage(ag, lambda red: red.gadget())


def ensure_origin(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Give the instance an origin vertex with an aligned spoke on every ray.

    Raises:
        OriginUnsupported: If the origin is empty and no aligned edge passes through it
    """
    return _stage(ag, lambda red: red.origin(allow_empty=False))


def place_origin_vertex(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """Like ensure_origin, but a new origin vertex may also go into an empty face."""
    return _stage(ag, lambda red: red.origin(allow_empty=True))


def add_outer_cycle(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Enclose the instance in a 2k-cycle with one vertex at the far end of every ray.

    Raises:
        PreconditionFailed: If the cycle cannot be joined to the graph along a ray
    """
    try:
        return _stage(ag, lambda red: red.outer_cycle(standalone=True))
    except EmbeddingError as e:
        raise PreconditionFailed(f"The outer cycle does not connect to the graph: {e}") from e


def triangulate_base(ag: AlignedGraph) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Triangulate every bounded face, adding free vertices and edges of complexity (1,1,0).

    Faces around an empty origin are left alone.
    """

    def run(red: StarReduction) -> None:
        red.saturate()
        red.triangulate(skip_empty_origin=True)

    return _stage(ag, run)


def restore_separating_edges(ag: AlignedGraph, plan: LiftPlan) -> AlignedGraph:
    """
    Put back every separating edge replaced by a gadget quadrangle.

    Whatever the triangulation put inside a quadrangle is removed first; the edge then
    splits the quadrangle into two triangles.
    """
    steps: List[RestoreSeparatingEdge]
    steps = plan.of_type(RestoreSeparatingEdge)  # type: ignore[assignment]
    if not steps:
        return ag
    o = ag.origin_vertex()
    outer = set(ag.graph.outer_face.vertices) if ag.graph.outer_face else set()
    drop_v: Set[str] = set()
    drop_e: Set[str] = set()
    for s in steps:
        cycle = [s.tail, s.w1, s.head, s.w2]
        left, right = cycle_sides(ag.graph, cycle)
        anchor = {o} if o is not None else outer - set(cycle)
        drop_v |= right if left & anchor else left
        for a, b in ((s.w1, s.w2), (s.tail, s.head)):
            e = ag.graph.edge_between(a, b)
            if e is not None:
                drop_e.add(e)
    ag = restrict(
        ag,
        [v for v in ag.vertices if v not in drop_v],
        [e for e in ag.edges if e not in drop_e],
    )

    p = Planarization.from_aligned(ag)
    for s in steps:
        if s.track is None:
            quad = {s.tail, s.w1, s.head, s.w2}
            face = next(
                (f for f in p.faces() if len(f) == 4 and {d[1] for d in f} == quad), None
            )
            if face is None:
                raise PreconditionFailed(f"Quadrangle of {s.edge} is not a face", witness=s.edge)
            i, j = tail_index(face, s.tail), tail_index(face, s.head)
            p.add_g_chord(s.edge, face, i, j, p.face_cell(face))
            continue
        t = s.track
        x1, x2 = f"@x{s.edges[1]}@{t}", f"@x{s.edges[3]}@{t}"
        seg = p.seg_between(x1, x2)
        if seg is None:
            raise PreconditionFailed(f"Quadrangle of {s.edge} is not empty", witness=s.edge)
        nid = p.fresh("@n")
        p.split_seg(seg, nid, PNode(NodeKind.CROSS, g_edge=s.edge, track=t))
        inward, outward = p.seg_between(nid, x1), p.seg_between(nid, x2)
        face = p.rs.trace((inward, nid))  # type: ignore[arg-type]
        p.add_piece_chord(s.edge, face, tail_index(face, s.tail), 0, p.arr.right_cell(t))
        face = p.rs.trace((outward, nid))  # type: ignore[arg-type]
        p.add_piece_chord(s.edge, face, 0, tail_index(face, s.head, 1), p.arr.left_cell(t))
        p.g_dir[s.edge] = (s.tail, s.head)
    logger.debug(f"restored {len(steps)} separating edges")
    return orient_ccw(p.to_aligned())


# -- elimination -------------------------------------------------------------


def _structural_rank(ag: AlignedGraph, o: str) -> Dict[str, int]:
    """2 for the outer cycle, 1 for the origin's neighbours, missing otherwise."""
    rank = {v: 1 for v in ag.graph.neighbors(o)}
    if ag.graph.outer_face is not None:
        rank.update({v: 2 for v in ag.graph.outer_face.vertices})
    return rank


def contract_edge(
    ag: AlignedGraph, e: str, survivor: str, track: Optional[int]
) -> Optional[Tuple[AlignedGraph, Uncontract]]:
    """Contract e into survivor and revalidate; None if the result is not a valid instance."""
    rs = RotationSystem.from_graph(ag.graph)
    try:
        record = rs.contract(e, survivor)
    except EmbeddingError:
        return None
    removed = record.removed
    dead = {e} | {merged for merged, _ in record.multi_edge_merges}
    placement = {v: p.unranked() for v, p in ag.placement.items() if v != removed}
    crossings = {x: s.unranked() for x, s in ag.crossings.items() if x not in dead}
    orders = {
        t: tuple(i for i in items if i != ("v", removed) and not (i[0] == "x" and i[1] in dead))
        for t, items in ag.orders.items()
    }
    try:
        new = build_aligned(rs.freeze(), ag.arr, placement, crossings, orders)
        if new.arr.is_star:
            new = orient_ccw(new)
    except AlignedError:
        return None
    return new, Uncontract(record, ag, track)


def _interior(ag: AlignedGraph, tri: Tuple[str, str, str], outside: Set[str]) -> Set[str]:
    """Vertices on the side of tri away from outside; empty if outside lies on both sides."""
    left, right = cycle_sides(ag.graph, tri)
    inner = right if left & outside else left
    return set() if inner & outside else inner


def _split_triangle(
    ag: AlignedGraph, tri: Tuple[str, str, str], outside: Set[str]
) -> Optional[Tuple[AlignedGraph, ReinsertSubgraph]]:
    inner = _interior(ag, tri, outside)
    if not inner:
        return None
    cells = {ag.placement[v].index if ag.placement[v].is_free else None for v in inner}
    if len(cells) != 1 or None in cells:
        return None
    touching = [e for e, (a, b) in ag.edges.items() if a in inner or b in inner]
    rim = [ag.graph.edge_between(tri[i], tri[(i + 1) % 3]) for i in range(3)]
    if any(ag.crossings[e].crossings for e in touching + rim):  # type: ignore[operator]
        return None
    try:
        part = restrict(ag, list(inner) + list(tri))
        rest = restrict(ag, [v for v in ag.vertices if v not in inner])
    except AlignedError:
        return None
    return orient_ccw(rest), ReinsertSubgraph(tri, inner=part)


def _edge_track(ag: AlignedGraph, e: str) -> Optional[int]:
    if not ag.crossings[e].aligned:
        return None
    return next(ag.placement[x].index for x in ag.edges[e] if ag.placement[x].on_track)


def _collapse_triangle(
    ag: AlignedGraph, tri: Tuple[str, str, str], outside: Set[str]
) -> Tuple[AlignedGraph, LiftPlan]:
    """
    Contract interior vertices of a separating triangle into their neighbours.

    The corners are pinned: every contraction removes an interior vertex. Stops when the
    interior is empty or no interior edge contracts to a valid instance.
    """
    sub = LiftPlan()
    while True:
        inner = _interior(ag, tri, outside)
        done = None
        for v in sorted(inner):
            for e in ag.graph.rotation[v]:
                done = contract_edge(ag, e, ag.graph.other_end(e, v), _edge_track(ag, e))
                if done is not None:
                    break
            if done is not None:
                break
        if done is None:
            return ag, sub
        ag, step = done
        sub.append(step)


def _collapse_pass(ag: AlignedGraph, o: str, plan: LiftPlan) -> Tuple[AlignedGraph, bool]:
    outside = {o} | (set(ag.graph.outer_face.vertices) if ag.graph.outer_face else set())
    for tri in separating_triangles(ag.graph):
        collapsed, sub = _collapse_triangle(ag, tri, outside - set(tri))
        if len(sub):
            plan.append(ReinsertSubgraph(tri, plan=sub))
            logger.debug(f"collapsed {len(sub)} vertices inside {tri}")
            return collapsed, True
    return ag, False


def _elimination_pass(ag: AlignedGraph, o: str, plan: LiftPlan) -> Tuple[AlignedGraph, bool]:
    changed = False
    outside = {o} | (set(ag.graph.outer_face.vertices) if ag.graph.outer_face else set())
    for tri in separating_triangles(ag.graph):
        if not all(v in ag.graph.rotation for v in tri) or any(
            ag.graph.edge_between(tri[i], tri[(i + 1) % 3]) is None for i in range(3)
        ):
            continue
        done = _split_triangle(ag, tri, outside - set(tri))
        if done is not None:
            ag, step = done
            plan.append(step)
            changed = True

    for e in sorted(ag.edges):
        if e not in ag.edges:
            continue
        a, b = ag.edges[e]
        if o in (a, b):
            continue
        kind = classify_edge(ag, e).kind
        if kind is EdgeKind.OTHER:
            continue
        if len(set(ag.graph.neighbors(a)) & set(ag.graph.neighbors(b))) != 2:
            continue
        rank = _structural_rank(ag, o)
        ra, rb = rank.get(a, 0), rank.get(b, 0)
        if ra == rb and ra > 0:
            continue
        survivor = b if rb > ra else a
        track = ag.placement[a].index if kind is EdgeKind.ALIGNED else None
        done = contract_edge(ag, e, survivor, track)  # type: ignore[arg-type]
        if done is not None:
            ag, step = done
            plan.append(step)
            changed = True
    return ag, changed


def reduction_certificates(ag: AlignedGraph) -> List[str]:
    """Properties a reduced star triangulation must have that ag violates."""
    failures: List[str] = []
    n = ag.arr.n_tracks
    o = ag.origin_vertex()
    if o is None:
        return ["no origin vertex"]
    if ag.graph.degree(o) != n or any(not ag.crossings[e].aligned for e in ag.graph.rotation[o]):
        failures.append(f"origin degree {ag.graph.degree(o)} is not {n} aligned spokes")
    outer = ag.graph.outer_face
    if outer is None or len(outer) != n:
        failures.append("outer face is not a cycle through every ray")
    else:
        for v in outer.vertices:
            pl = ag.placement[v]
            if not pl.on_track or ag.vertices_on(pl.index)[-1] != v:  # type: ignore[arg-type]
                failures.append(f"outer vertex {v} is not outermost on a ray")
    if separating_triangles(ag.graph):
        failures.append("separating triangles remain")
    for e, (a, b) in ag.edges.items():
        kind = classify_edge(ag, e).kind
        if kind is EdgeKind.FREE:
            failures.append(f"free edge {e} remains")
        elif kind is EdgeKind.ALIGNED and o not in (a, b):
            failures.append(f"aligned edge {e} away from the origin remains")
    report = structure_check(ag)
    if not report.ok:
        failures.append(f"structure: {report.kind} at {report.witness}")
    return failures


def _reduced(ag: AlignedGraph) -> ReducedStarTriangulation:
    o = ag.origin_vertex()
    cycle = tuple(ag.vertices_on(r)[-1] for r in range(ag.arr.n_tracks))
    return ReducedStarTriangulation(ag, o, cycle)  # type: ignore[arg-type]


def eliminate(ag: AlignedGraph) -> Tuple[ReducedStarTriangulation, LiftPlan]:
    """
    Split off separating triangles and contract edges until nothing applies.

    Separating triangles that cannot be split off, because pseudolines run through them,
    are collapsed: their interior is contracted into the pinned corners and recorded as
    one ReinsertSubgraph step.

    Raises:
        PreconditionFailed: If ag has no origin vertex
        UnsupportedNesting: If the fixpoint is not a reduced star triangulation
    """
    o = ag.origin_vertex()
    if o is None:
        raise PreconditionFailed("Elimination needs an origin vertex")
    plan = LiftPlan()
    while True:
        changed = True
        while changed:
            ag, changed = _elimination_pass(ag, o, plan)
        failures = reduction_certificates(ag)
        if not failures:
            break
        ag, collapsed = _collapse_pass(ag, o, plan)
        if not collapsed:
            break
    if failures:
        raise UnsupportedNesting(f"Reduction stuck: {failures[0]}", witness=failures)
    logger.debug(f"eliminated down to {len(ag.vertices)} vertices in {len(plan)} steps")
    return _reduced(ag), plan


def _closed_combs(ag: AlignedGraph) -> List[Tuple[str, str]]:
    """(source, vertex) for every closed comb holding a vertex."""
    result = []
    for cell in range(ag.arr.n_cells):
        for comb in combs(ag, cell):
            if comb.closed and comb.vertices:
                result.append((ag.edges[comb.inner][0], comb.vertices[0]))  # type: ignore[index]
    return result


def kill_closed_combs(rt: ReducedStarTriangulation) -> Tuple[ReducedStarTriangulation, LiftPlan]:
    """
    Contract the vertex of every closed comb into the comb's source.

    Raises:
        UnsupportedNesting: If a contraction is impossible or does not reduce the
            number of occupied closed combs
    """
    plan = LiftPlan()
    ag = rt.ag
    occupied = _closed_combs(ag)
    while occupied:
        u, v = occupied[0]
        e = ag.graph.edge_between(u, v)
        done = contract_edge(ag, e, u, None) if e is not None else None
        if done is None:
            raise UnsupportedNesting(f"Closed comb vertex {v} cannot merge into {u}", witness=v)
        ag, step = done
        plan.append(step)
        rt, sub = eliminate(ag)
        plan.extend(sub)
        ag = rt.ag
        remaining = _closed_combs(ag)
        if len(remaining) >= len(occupied):
            raise UnsupportedNesting("Closed combs do not shrink", witness=remaining)
        occupied = remaining
    return _reduced(ag), plan


def reduce_star(ag: AlignedGraph) -> Tuple[ReducedStarTriangulation, LiftPlan]:
    """
    Reduce a star instance of complexity at most (1,1,0) to a reduced star triangulation.

    Returns:
        The reduced instance and the plan lifting its drawings back to ag
    """
    ag = prepare_star(ag)
    ag, plan = anchor_floating(ag)
    red = StarReduction(ag)
    red.gadget()
    red.origin(allow_empty=True)
    red.outer_cycle()
    red.collar()
    red.saturate()
    red.triangulate()
    plan.extend(red.plan)
    ag = restore_separating_edges(red.to_aligned(), red.plan)
    rt, sub = eliminate(ag)
    plan.extend(sub)
    rt, sub = kill_closed_combs(rt)
    plan.extend(sub)
    logger.info(f"reduced to {len(rt.ag.vertices)} vertices with {len(plan)} lift steps")
    return rt, plan
