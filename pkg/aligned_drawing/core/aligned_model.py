"""
Aligned-graph construction, validation and combinatorial queries.

build_aligned is the single entry point that turns raw annotations into a validated
AlignedGraph; every pipeline step funnels its output back through it.
"""

from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from aligned_drawing.core.planar import RotationSystem, build_embedding
from aligned_drawing.core.planarization import PEdgeKind, Planarization
from aligned_drawing.exceptions import (
    ComplexityExceeded,
    EmbeddingError,
    InconsistentAnnotation,
    NotCcwAligned,
)
from aligned_drawing.models.aligned import (
    AlignedGraph,
    Arrangement,
    Comb,
    Complexity,
    Crossing,
    CrossingSpec,
    EdgeClass,
    EdgeKind,
    Item,
    Placement,
    PlacementKind,
    StructureReport,
)
from aligned_drawing.models.embedding import EmbeddedGraph
from aligned_drawing.utils.logger import logger

# ordinals of the anchored rotation blocks around a track vertex
FWD, LEFT, BACK, RIGHT = 0, 1, 2, 3


def _fail(message: str, witness: object = None) -> InconsistentAnnotation:
    return InconsistentAnnotation(message, witness=witness)


def _endpoint_lines(arr: Arrangement, p: Placement) -> Set[int]:
    if p.is_origin:
        return set(range(arr.n_lines))
    if p.on_track:
        return {arr.line_of(p.index)}  # type: ignore[arg-type]
    return set()


def _cell_options(arr: Arrangement, p: Placement) -> Set[int]:
    if p.is_free:
        return {p.index}  # type: ignore[arg-type]
    if p.is_origin:
        return set(range(arr.n_cells))
    return {arr.left_cell(p.index), arr.right_cell(p.index)}  # type: ignore[arg-type]


def edge_cells(
    arr: Arrangement, eid: str, tail: Placement, head: Placement, spec: CrossingSpec
) -> Tuple[int, ...]:
    """
    Cell sequence of a non-aligned edge from tail to head.

    Raises:
        InconsistentAnnotation: If crossings and endpoint placements do not fit together
    """
    tracks = spec.tracks
    if tail.is_free:
        first = tail.index
    elif tracks:
        if tail.is_origin:
            raise _fail(f"Edge {eid} leaves the origin and crosses a track", eid)
        first = arr.shared_cell(tail.index, tracks[0])  # type: ignore[arg-type]
    elif head.is_free:
        first = head.index
    elif tail.on_track and head.on_track and tail.index != head.index:
        first = arr.shared_cell(tail.index, head.index)  # type: ignore[arg-type]
    else:
        first = spec.side
        if first is None:
            raise _fail(f"Edge {eid} runs along a track and needs a side cell", eid)
    if first is None or first not in _cell_options(arr, tail):
        raise _fail(f"Edge {eid} cannot leave its tail into a common cell", eid)

    cells = [first]
    for t in tracks:
        nxt = arr.across(t, cells[-1])
        if nxt is None:
            raise _fail(f"Edge {eid} crosses track {t} which does not bound cell {cells[-1]}", eid)
        cells.append(nxt)
    if cells[-1] not in _cell_options(arr, head):
        raise _fail(f"Edge {eid} ends in cell {cells[-1]} away from its head", eid)
    return tuple(cells)


def _check_placements(arr: Arrangement, placement: Mapping[str, Placement]) -> None:
    origins = [v for v, p in placement.items() if p.is_origin]
    if len(origins) > 1:
        raise _fail(f"More than one vertex at the origin: {origins}", origins)
    for v, p in placement.items():
        if p.kind is PlacementKind.ORIGIN:
            if not arr.is_star:
                raise _fail(f"Vertex {v} is at the origin of a parallel arrangement", v)
            continue
        if p.kind is PlacementKind.RAY and not arr.is_star:
            raise _fail(f"Vertex {v} is on a ray of a parallel arrangement", v)
        if p.kind is PlacementKind.LAYER and arr.is_star:
            raise _fail(f"Vertex {v} is on a layer of a star arrangement", v)
        limit = arr.n_cells if p.is_free else arr.n_tracks
        if p.index is None or not 0 <= p.index < limit:
            raise _fail(f"Vertex {v} has placement index {p.index} out of range", v)


def _check_orders(
    arr: Arrangement,
    graph: EmbeddedGraph,
    placement: Mapping[str, Placement],
    crossings: Mapping[str, CrossingSpec],
    orders: Mapping[int, Sequence[Item]],
) -> Dict[int, Tuple[Item, ...]]:
    extra = set(orders) - set(range(arr.n_tracks))
    if extra:
        raise _fail(f"Orders given for unknown tracks {sorted(extra)}", sorted(extra))
    norm = {t: tuple(tuple(i) for i in orders.get(t, ())) for t in range(arr.n_tracks)}

    seen: Set[Tuple[str, str, int]] = set()
    for t, items in norm.items():
        for kind, ref in items:  # type: ignore[misc]
            key = (kind, ref, t)
            if key in seen or (kind == "v" and any(s[:2] == ("v", ref) for s in seen)):
                raise _fail(f"Item {(kind, ref)} listed twice", ref)
            seen.add(key)
            if kind == "v":
                p = placement.get(ref)
                if p is None or not p.on_track or p.index != t:
                    raise _fail(f"Vertex {ref} is listed on track {t} but not placed there", ref)
            elif kind == "x":
                spec = crossings.get(ref)
                if spec is None or t not in spec.tracks:
                    raise _fail(f"Edge {ref} is listed as crossing track {t} but does not", ref)
            else:
                raise _fail(f"Unknown item kind {kind!r}", ref)

    for v in graph.vertices:
        p = placement[v]
        if p.on_track and ("v", v, p.index) not in seen:
            raise _fail(f"Vertex {v} is missing from the order of track {p.index}", v)
    for e, spec in crossings.items():
        for t in spec.tracks:
            if ("x", e, t) not in seen:
                raise _fail(f"Crossing of {e} with track {t} is missing from its order", e)
    return norm  # type: ignore[return-value]


def _check_edge_lines(
    arr: Arrangement,
    graph: EmbeddedGraph,
    placement: Mapping[str, Placement],
    crossings: Mapping[str, CrossingSpec],
    orders: Mapping[int, Tuple[Item, ...]],
) -> None:
    has_origin_vertex = any(p.is_origin for p in placement.values())
    for e, (a, b) in graph.edges.items():
        spec = crossings[e]
        pa, pb = placement[a], placement[b]
        if spec.aligned:
            if spec.crossings:
                raise _fail(f"Aligned edge {e} has crossings", e)
            if pa.is_origin or pb.is_origin:
                other = pb if pa.is_origin else pa
                end = b if pa.is_origin else a
                ok = other.on_track and orders[other.index][0] == ("v", end)  # type: ignore[index]
                if not ok:
                    raise _fail(f"Aligned edge {e} skips items between the origin and its end", e)
                continue
            if not (pa.on_track and pb.on_track):
                raise _fail(f"Aligned edge {e} has an endpoint off the arrangement", e)
            if arr.line_of(pa.index) != arr.line_of(pb.index):  # type: ignore[arg-type]
                raise _fail(f"Aligned edge {e} joins two different pseudolines", e)
            if pa.index == pb.index:
                ra = orders[pa.index].index(("v", a))  # type: ignore[index]
                rb = orders[pb.index].index(("v", b))  # type: ignore[index]
                if abs(ra - rb) != 1:
                    raise _fail(f"Aligned edge {e} skips items on track {pa.index}", e)
            else:
                # through the origin: both innermost and the origin is empty
                innermost = (
                    orders[pa.index][0] == ("v", a)  # type: ignore[index]
                    and orders[pb.index][0] == ("v", b)  # type: ignore[index]
                )
                if has_origin_vertex or not innermost:
                    raise _fail(f"Aligned edge {e} through the origin is not innermost", e)
            continue

        lines = [arr.line_of(t) for t in spec.tracks]
        if len(set(lines)) != len(lines):
            raise _fail(f"Edge {e} crosses a pseudoline more than once", e)
        ends = _endpoint_lines(arr, pa) | _endpoint_lines(arr, pb)
        if set(lines) & ends:
            raise _fail(f"Edge {e} crosses a pseudoline that carries one of its endpoints", e)


def _rotation_labels(
    arr: Arrangement,
    graph: EmbeddedGraph,
    placement: Mapping[str, Placement],
    crossings: Mapping[str, CrossingSpec],
    cells: Mapping[str, Tuple[int, ...]],
    orders: Mapping[int, Tuple[Item, ...]],
    v: str,
) -> List[int]:
    p = placement[v]
    labels = []
    for e in graph.rotation[v]:
        w = graph.other_end(e, v)
        seq = cells.get(e, ())
        end_cell = (seq[0] if graph.edges[e][0] == v else seq[-1]) if seq else None
        if p.is_origin:
            if crossings[e].aligned:
                labels.append(2 * placement[w].index)  # type: ignore[operator]
            else:
                labels.append(2 * end_cell + 1)  # type: ignore[operator]
            continue
        t = p.index
        if crossings[e].aligned:
            pw = placement[w]
            if pw.on_track and pw.index == t:
                order = orders[t]  # type: ignore[index]
                outward = order.index(("v", w)) > order.index(("v", v))
                labels.append(FWD if outward else BACK)
            else:
                labels.append(BACK)
        else:
            labels.append(LEFT if end_cell == arr.left_cell(t) else RIGHT)  # type: ignore[arg-type]
    return labels


def anchor_rotation(rot: Sequence[str], labels: Sequence[int], v: str) -> List[str]:
    """
    Rotate a cyclic rotation so its block labels are non-decreasing.

    When every edge carries the same label the given order is kept as the anchored one.

    Raises:
        InconsistentAnnotation: If the labels are not cyclically monotone
    """
    n = len(rot)
    descents = [i for i in range(n) if labels[i] > labels[(i + 1) % n]]
    if not descents:
        return list(rot)
    if len(descents) > 1:
        raise _fail(f"Edges around {v} do not respect the sides of its track", v)
    start = (descents[0] + 1) % n
    return list(rot[start:]) + list(rot[:start])


def build_aligned(
    graph: EmbeddedGraph,
    arr: Arrangement,
    placement: Mapping[str, Placement],
    crossings: Mapping[str, CrossingSpec],
    orders: Mapping[int, Sequence[Item]],
) -> AlignedGraph:
    """
    Validate annotations and build an AlignedGraph.

    Checks placements, order lists, ranks, at-most-one crossing per pseudoline, cell
    consistency of every edge, anchored rotations and finally the planarization
    (plane, one cell per face, faces matching the embedding).

    Raises:
        InconsistentAnnotation: Pinpointing the first violated check
    """
    for v in graph.vertices:
        if v.startswith("@"):
            raise _fail(f"Vertex id {v!r} uses the reserved '@' prefix", v)
        if v not in placement:
            raise _fail(f"Vertex {v} has no placement", v)
        if graph.degree(v) == 0:
            raise _fail(f"Vertex {v} has degree 0", v)
    for e in graph.edges:
        if e.startswith("@"):
            raise _fail(f"Edge id {e!r} uses the reserved '@' prefix", e)
        if e not in crossings:
            raise _fail(f"Edge {e} has no crossing annotation", e)
    extra = (set(placement) - set(graph.vertices)) | (set(crossings) - set(graph.edges))
    if extra:
        raise _fail(f"Annotations for unknown ids {sorted(extra)}", sorted(extra))

    _check_placements(arr, placement)
    norm_orders = _check_orders(arr, graph, placement, crossings, orders)
    _check_edge_lines(arr, graph, placement, crossings, norm_orders)

    # ranks derive from the orders; given ranks must agree
    ranked_placement: Dict[str, Placement] = {}
    for v in graph.vertices:
        p = placement[v]
        if p.on_track:
            rank = norm_orders[p.index].index(("v", v)) + 1  # type: ignore[index]
            if p.rank is not None and p.rank != rank:
                raise _fail(f"Vertex {v} has rank {p.rank} but is item {rank} of its track", v)
            p = p.with_rank(rank)
        ranked_placement[v] = p
    ranked_crossings: Dict[str, CrossingSpec] = {}
    for e in graph.edges:
        spec = crossings[e]
        items = []
        for c in spec.crossings:
            rank = norm_orders[c.track].index(("x", e)) + 1
            if c.rank is not None and c.rank != rank:
                raise _fail(
                    f"Crossing of {e} with track {c.track} has rank {c.rank}, expected {rank}", e
                )
            items.append(Crossing(c.track, rank))
        ranked_crossings[e] = CrossingSpec(tuple(items), spec.aligned, spec.side)

    cells: Dict[str, Tuple[int, ...]] = {}
    for e, (a, b) in graph.edges.items():
        spec = ranked_crossings[e]
        if not spec.aligned:
            cells[e] = edge_cells(arr, e, ranked_placement[a], ranked_placement[b], spec)

    rotation: Dict[str, List[str]] = {}
    for v in graph.vertices:
        p = ranked_placement[v]
        rot = list(graph.rotation[v])
        if p.on_track or p.is_origin:
            labels = _rotation_labels(
                arr, graph, ranked_placement, ranked_crossings, cells, norm_orders, v
            )
            if labels.count(FWD) > 1 or (labels.count(BACK) > 1 and not p.is_origin):
                raise _fail(f"Vertex {v} has two aligned edges in one direction", v)
            rot = anchor_rotation(rot, labels, v)
        rotation[v] = rot
    try:
        anchored = build_embedding(graph.vertices, rotation, graph.edges, graph.outer)
    except EmbeddingError as e:
        raise _fail(f"Anchored rotation is not a valid embedding: {e}") from e

    ag = AlignedGraph(anchored, arr, ranked_placement, ranked_crossings, norm_orders, cells)
    touches = any(not p.is_free for p in ranked_placement.values()) or any(
        s.crossings for s in ranked_crossings.values()
    )
    if not touches:
        used = {p.index for p in ranked_placement.values()}
        if len(used) > 1:
            spanned = sorted(used)  # type: ignore[type-var]
            raise _fail(f"Graph away from the arrangement spans cells {spanned}")
        return ag

    p = Planarization.from_aligned(ag)
    p.validate(len(anchored.faces), anchored.outer)
    return ag


def rebuild(ag: AlignedGraph, **changes) -> AlignedGraph:
    """build_aligned on ag with some of its components replaced."""
    data = {
        "graph": ag.graph,
        "arr": ag.arr,
        "placement": {v: p.unranked() for v, p in ag.placement.items()},
        "crossings": {e: s.unranked() for e, s in ag.crossings.items()},
        "orders": ag.orders,
    }
    data.update(changes)
    return build_aligned(**data)  # type: ignore[arg-type]


def classify_edge(ag: AlignedGraph, eid: str) -> EdgeClass:
    """Anchoredness counts endpoints on distinct pseudolines; the origin fits any line."""
    a, b = ag.edges[eid]
    spec = ag.crossings[eid]
    pa, pb = ag.placement[a], ag.placement[b]
    anchored = sum(1 for p in (pa, pb) if not p.is_free)
    if pa.on_track and pb.on_track:
        if ag.arr.line_of(pa.index) == ag.arr.line_of(pb.index):  # type: ignore[arg-type]
            anchored = 1
    crossed = len(spec.crossings)
    if spec.aligned:
        kind = EdgeKind.ALIGNED
    elif anchored == 0 and crossed == 0:
        kind = EdgeKind.FREE
    else:
        kind = EdgeKind.OTHER
    return EdgeClass(anchored, crossed, kind)


def alignment_complexity(ag: AlignedGraph) -> Complexity:
    """(l0, l1, l2): per anchoredness class the largest crossedness, None when empty."""
    result: List[Optional[int]] = [None, None, None]
    for e in ag.edges:
        c = classify_edge(ag, e)
        if c.kind is EdgeKind.ALIGNED:
            continue
        cur = result[c.anchored]
        result[c.anchored] = c.crossed if cur is None else max(cur, c.crossed)
    return (result[0], result[1], result[2])


def complexity_at_most(c: Complexity, bound: Complexity) -> bool:
    """Componentwise comparison with None as bottom."""
    for have, limit in zip(c, bound):
        if have is None:
            continue
        if limit is None or have > limit:
            return False
    return True


def _wants_flip(ag: AlignedGraph, e: str) -> bool:
    arr = ag.arr
    n = arr.n_tracks
    a, b = ag.edges[e]
    pa, pb = ag.placement[a], ag.placement[b]
    cells = ag.cells[e]
    if len(cells) == 2:
        return cells[1] != (cells[0] + 1) % n
    c = cells[0]
    if pa.is_origin or pb.is_origin:
        return pb.is_origin
    if pa.on_track and pb.on_track:
        if pa.index == pb.index:
            return False
        return pa.index != c
    if pa.on_track:
        return pa.index != c
    if pb.on_track:
        return pb.index == c
    return False


def orient_ccw(ag: AlignedGraph) -> AlignedGraph:
    """
    Direct every non-aligned edge counterclockwise.

    Crossed edges advance from cell Q_c to Q_{c+1}; uncrossed anchored edges leave the right
    boundary ray of their cell. Idempotent.

    Raises:
        ComplexityExceeded: If ag is not a star instance of complexity at most (1,1,0)
        NotCcwAligned: If a 1-anchored 1-crossed edge would need a free source
    """
    if not ag.arr.is_star:
        raise ComplexityExceeded("Counterclockwise orientation needs a star arrangement")
    comp = alignment_complexity(ag)
    if not complexity_at_most(comp, (1, 1, 0)):
        raise ComplexityExceeded(f"Alignment complexity {comp} exceeds (1,1,0)", witness=comp)

    edges = dict(ag.edges)
    crossings = dict(ag.crossings)
    flipped = []
    for e in ag.edges:
        if ag.crossings[e].aligned or not _wants_flip(ag, e):
            continue
        a, b = edges[e]
        edges[e] = (b, a)
        crossings[e] = crossings[e].reversed()
        flipped.append(e)

    for e, (a, b) in edges.items():
        c = classify_edge(ag, e)
        if c.anchored == 1 and c.crossed == 1 and ag.placement[a].is_free:
            raise NotCcwAligned(f"1-anchored 1-crossed edge {e} has a free source {a}", witness=e)

    if not flipped:
        return ag
    logger.debug(f"orient_ccw flipped {len(flipped)} edges")
    g = ag.graph
    graph = build_embedding(g.vertices, g.rotation, edges, g.outer)
    return rebuild(ag, graph=graph, crossings=crossings)


def is_separating(ag: AlignedGraph, e: str) -> bool:
    """1-anchored 1-crossed or 2-anchored (non-aligned) edges."""
    c = classify_edge(ag, e)
    if c.kind is EdgeKind.ALIGNED:
        return False
    return (c.anchored == 1 and c.crossed == 1) or c.anchored == 2


def separating_in_cell(ag: AlignedGraph, cell: int) -> List[str]:
    """Separating edges whose source lies on ray `cell` and which span cell Q_cell, sorted."""
    result = []
    for e, (a, b) in ag.edges.items():
        if not is_separating(ag, e):
            continue
        pa = ag.placement[a]
        if pa.kind is not PlacementKind.RAY or pa.index != cell or ag.cells[e][0] != cell:
            continue
        if len(ag.cells[e]) == 1 and ag.placement[b].index != (cell + 1) % ag.arr.n_tracks:
            continue
        result.append(e)

    nxt = (cell + 1) % ag.arr.n_tracks

    def far_rank(e: str) -> int:
        spec = ag.crossings[e]
        if spec.crossings:
            return spec.crossings[0].rank  # type: ignore[return-value]
        return ag.track_position(nxt, ("v", ag.edges[e][1]))

    return sorted(result, key=lambda e: (ag.placement[ag.edges[e][0]].rank, far_rank(e)))


def combs(ag: AlignedGraph, cell: int) -> List[Comb]:
    """
    Regions of a cell between consecutive separating edges, inner to outer.

    The first and last comb use the cell boundary (None) as one side. A comb is closed
    when both of its separating edges share their source.
    """
    seps = separating_in_cell(ag, cell)
    free_here = [v for v in ag.free_vertices() if ag.placement[v].index == cell]
    if not ag.graph.edges:
        return [Comb(cell, None, None, free_here)]

    p = Planarization.from_aligned(ag)
    faces = p.faces()
    index = {d: i for i, f in enumerate(faces) for d in f}
    in_cell = [i for i, f in enumerate(faces) if p.face_cell(f) == cell]
    dsu = nx.utils.UnionFind(in_cell)

    first_piece = {}
    for e in seps:
        tail = ag.edges[e][0]
        first_piece[e] = p.g_dart(e, tail)[0]
    sep_pieces = set(first_piece.values())
    for eid, pe in p.pedges.items():
        if pe.kind is PEdgeKind.PIECE and pe.cell == cell and eid not in sep_pieces:
            a, b = p.rs.edges[eid]
            dsu.union(index[(eid, a)], index[(eid, b)])

    def region_of(v: str) -> int:
        eid = p.rs.rot[v][0]
        return dsu[index[(eid, v)]]

    bounds: List[Optional[str]] = [None] + seps + [None]  # type: ignore[operator]
    result = []
    for inner, outer in zip(bounds, bounds[1:]):
        if inner is not None:
            pid = first_piece[inner]
            target = dsu[index[(pid, p.rs.edges[pid][1])]]
        elif outer is not None:
            pid = first_piece[outer]
            target = dsu[index[(pid, p.rs.edges[pid][0])]]
        else:
            target = None
        members = [v for v in free_here if target is None or region_of(v) == target]
        closed = (
            inner is not None and outer is not None and ag.edges[inner][0] == ag.edges[outer][0]
        )
        result.append(Comb(cell, inner, outer, members, closed))
    return result


def structure_check(ag: AlignedGraph) -> StructureReport:
    """
    Check alternation of vertices and crossings on every track, then comb occupancy.

    The origin vertex is not part of any track order, so it never takes part in the
    alternation test.
    """
    for t, items in ag.orders.items():
        for x, y in zip(items, items[1:]):
            if x[0] == "v" and y[0] == "v":
                return StructureReport(False, "consecutive-vertices", (t, x[1], y[1]))
            if x[0] == "x" and y[0] == "x":
                return StructureReport(False, "consecutive-crossings", (t, x[1], y[1]))
    if ag.arr.is_star:
        for cell in range(ag.arr.n_cells):
            for comb in combs(ag, cell):
                if len(comb.vertices) >= 2:
                    return StructureReport(False, "comb-overfull", (cell, tuple(comb.vertices)))
    return StructureReport(True)


def restrict(
    ag: AlignedGraph, vertices: Sequence[str], edges: Optional[Sequence[str]] = None
) -> AlignedGraph:
    """Sub-instance on a vertex subset (and optionally an edge subset of its induced edges)."""
    keep_v = set(vertices)
    induced = {e for e, (a, b) in ag.edges.items() if a in keep_v and b in keep_v}
    keep_e = induced if edges is None else induced & set(edges)
    rs = RotationSystem.from_graph(ag.graph)
    rs.delete(
        vertices=[v for v in ag.vertices if v not in keep_v],
        edges=[e for e in ag.edges if e not in keep_e],
    )
    graph = rs.freeze()
    orders = {
        t: tuple(i for i in items if i[1] in (keep_v if i[0] == "v" else keep_e))
        for t, items in ag.orders.items()
    }
    return build_aligned(
        graph,
        ag.arr,
        {v: ag.placement[v].unranked() for v in graph.vertices},
        {e: ag.crossings[e].unranked() for e in graph.edges},
        orders,
    )


def restrict_lines(ag: AlignedGraph, lines: Sequence[int]) -> AlignedGraph:
    """
    Forget every pseudoline not listed (star instances).

    Vertices on forgotten rays become free in the merged cell, crossings with forgotten
    rays disappear, and aligned edges on forgotten lines become ordinary edges.
    """
    arr = ag.arr
    if not arr.is_star:
        raise ComplexityExceeded("restrict_lines applies to star arrangements")
    keep = sorted(set(lines))
    if len(keep) < 2:
        raise ComplexityExceeded("A star arrangement needs at least two pseudolines")
    k = arr.size
    kept_rays = sorted([line for line in keep] + [line + k for line in keep])
    new_ray = {r: i for i, r in enumerate(kept_rays)}

    def cell_of(old_cell: int) -> int:
        # the new cell starts at the last kept ray at or before the old cell's right ray
        best = max((r for r in kept_rays if r <= old_cell), default=kept_rays[-1])
        return new_ray[best]

    new_arr = Arrangement.star(len(keep))
    placement: Dict[str, Placement] = {}
    for v, p in ag.placement.items():
        if p.kind is PlacementKind.RAY:
            if p.index in new_ray:
                placement[v] = Placement.on_ray(new_ray[p.index])  # type: ignore[index]
            else:
                placement[v] = Placement.in_cell(cell_of(p.index))  # type: ignore[arg-type]
        elif p.is_free:
            placement[v] = Placement.in_cell(cell_of(p.index))  # type: ignore[arg-type]
        else:
            placement[v] = p
    crossings: Dict[str, CrossingSpec] = {}
    for e, spec in ag.crossings.items():
        kept = tuple(Crossing(new_ray[c.track]) for c in spec.crossings if c.track in new_ray)
        aligned = spec.aligned
        if aligned:
            a, b = ag.edges[e]
            pa, pb = ag.placement[a], ag.placement[b]
            on = pa if pa.on_track else pb
            aligned = on.index in new_ray
        side = cell_of(ag.cells[e][0]) if e in ag.cells and not kept else None
        if spec.aligned and not aligned:
            # the edge ran along a forgotten ray; it now lies inside the merged cell
            a, b = ag.edges[e]
            on = ag.placement[a] if ag.placement[a].on_track else ag.placement[b]
            side = cell_of(on.index)  # type: ignore[arg-type]
        crossings[e] = CrossingSpec(kept, aligned, side)
    orders = {new_ray[t]: items for t, items in ag.orders.items() if t in new_ray}
    orders = {
        t: tuple(
            i
            for i in items
            if i[0] == "v" or any(c.track == t for c in crossings[i[1]].crossings)
        )
        for t, items in orders.items()
    }
    return build_aligned(ag.graph, new_arr, placement, crossings, orders)
