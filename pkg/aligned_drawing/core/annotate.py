"""
Read an aligned graph off a concrete straight-line drawing.

The rotation system, crossings and track orders all come from exact coordinates, so
any drawing can be turned into an instance and compared with the one it claims to draw.
"""

from typing import Dict, List, Mapping, Optional, Tuple

from aligned_drawing.core.aligned_model import build_aligned
from aligned_drawing.core.arrangement import (
    arrangement_of,
    locate,
    same_line,
    signed_area2,
    sort_ccw,
    track_hits,
    track_param,
)
from aligned_drawing.core.planar import build_embedding
from aligned_drawing.exceptions import InconsistentAnnotation
from aligned_drawing.models.aligned import AlignedGraph, Crossing, CrossingSpec, Item, Placement
from aligned_drawing.models.drawing import Drawing
from aligned_drawing.models.embedding import Dart, EmbeddedGraph
from aligned_drawing.models.geometry import Point


def geometric_rotation(
    coords: Mapping[str, Point], edges: Mapping[str, Tuple[str, str]]
) -> Dict[str, List[str]]:
    """Incident edges of every vertex sorted counterclockwise by direction."""
    incident: Dict[str, Dict[str, Point]] = {v: {} for v in coords}
    for e, (a, b) in edges.items():
        incident[a][e] = coords[b] - coords[a]
        incident[b][e] = coords[a] - coords[b]
    return {v: sort_ccw(vecs) for v, vecs in incident.items()}


def geometric_outer_dart(graph: EmbeddedGraph, coords: Mapping[str, Point]) -> Optional[Dart]:
    """A dart of the face with negative signed area; the only face of a tree."""
    faces = graph.faces
    if len(faces) == 1:
        return faces[0].id
    for f in faces:
        if signed_area2([coords[v] for v in f.vertices]) < 0:
            return f.id
    return None


def annotate_drawing(d: Drawing, edges: Mapping[str, Tuple[str, str]]) -> AlignedGraph:
    """
    Build the aligned graph realized by a drawing.

    Edge directions are kept as given. An edge whose endpoints share a pseudoline lies on
    it and becomes aligned.

    Raises:
        InconsistentAnnotation: If there are no edges, if the drawing is not plane enough to
            define an instance (overlapping edges, an edge through the origin) or if it fails
            validation
    """
    if not edges:
        raise InconsistentAnnotation("A drawing needs at least one edge")
    geom = d.lines
    arr = arrangement_of(geom)
    vertices = sorted({v for ends in edges.values() for v in ends})
    missing = [v for v in vertices if v not in d.coords]
    if missing:
        raise InconsistentAnnotation(f"Vertices without coordinates: {missing}", witness=missing)
    coords = {v: d.coords[v] for v in vertices}
    placement: Dict[str, Placement] = {v: locate(geom, p) for v, p in coords.items()}

    items: Dict[int, List[Tuple[object, Item]]] = {t: [] for t in range(arr.n_tracks)}
    for v, pl in placement.items():
        if pl.on_track:
            t = track_param(geom, pl.index, coords[v])  # type: ignore[arg-type]
            items[pl.index].append((t, ("v", v)))  # type: ignore[index]

    crossings: Dict[str, CrossingSpec] = {}
    for e, (a, b) in edges.items():
        if same_line(geom, arr, placement[a], placement[b]):
            crossings[e] = CrossingSpec(aligned=True)
            continue
        hits = track_hits(geom, coords[a], coords[b])
        crossings[e] = CrossingSpec(tuple(Crossing(h.track) for h in hits))
        for h in hits:
            items[h.track].append((track_param(geom, h.track, h.point), ("x", e)))

    orders: Dict[int, List[Item]] = {}
    for t, entries in items.items():
        entries.sort(key=lambda entry: entry[0])  # type: ignore[arg-type,return-value]
        params = [p for p, _ in entries]
        if len(set(params)) != len(params):
            raise InconsistentAnnotation(f"Two items meet at one point of track {t}", witness=t)
        orders[t] = [item for _, item in entries]

    rotation = geometric_rotation(coords, edges)
    for v, rot in rotation.items():
        directions = [_direction_key(coords, edges, e, v) for e in rot]
        if len(set(directions)) != len(directions):
            raise InconsistentAnnotation(f"Two edges leave {v} in the same direction", witness=v)
    graph = build_embedding(vertices, rotation, edges, None, require_outer=False)
    outer = geometric_outer_dart(graph, coords)
    if outer is None:
        raise InconsistentAnnotation("No face of the drawing has negative area")
    graph = build_embedding(vertices, rotation, edges, outer)
    return build_aligned(graph, arr, placement, crossings, orders)


def _direction_key(
    coords: Mapping[str, Point], edges: Mapping[str, Tuple[str, str]], e: str, v: str
) -> Tuple[object, object]:
    a, b = edges[e]
    w = b if a == v else a
    vec = coords[w] - coords[v]
    scale = abs(vec.x) + abs(vec.y)
    return (vec.x / scale, vec.y / scale)
