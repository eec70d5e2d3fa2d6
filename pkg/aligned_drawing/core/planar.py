"""
Combinatorial planar embeddings.

EmbeddedGraph is the immutable, validated form. RotationSystem is the mutable working
form used by the reduction pipelines; freeze() validates and converts back.
"""

from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from aligned_drawing.exceptions import (
    InconsistentRotation,
    NotContractible,
    NotPlanarRotation,
    NotSeparating,
    SelfLoop,
)
from aligned_drawing.models.embedding import ContractionRecord, Dart, EmbeddedGraph, Face

Triangle = Tuple[str, str, str]


class RotationSystem:
    """Mutable rotation system with an outer-face dart."""

    def __init__(
        self,
        vertices: Iterable[str] = (),
        edges: Optional[Mapping[str, Tuple[str, str]]] = None,
        rotation: Optional[Mapping[str, Sequence[str]]] = None,
        outer: Optional[Dart] = None,
    ):
        self.vertices: List[str] = list(vertices)
        self.edges: Dict[str, Tuple[str, str]] = dict(edges or {})
        rotation = rotation or {}
        self.rot: Dict[str, List[str]] = {v: list(rotation.get(v, ())) for v in self.vertices}
        self.outer = outer

    @classmethod
    def from_graph(cls, g: EmbeddedGraph) -> "RotationSystem":
        return cls(g.vertices, g.edges, g.rotation, g.outer)

    def copy(self) -> "RotationSystem":
        return RotationSystem(self.vertices, self.edges, self.rot, self.outer)

    # -- navigation -------------------------------------------------------

    def other_end(self, eid: str, v: str) -> str:
        a, b = self.edges[eid]
        return b if v == a else a

    def head(self, dart: Dart) -> str:
        return self.other_end(dart[0], dart[1])

    def next_dart(self, dart: Dart) -> Dart:
        v = self.head(dart)
        rot = self.rot[v]
        return (rot[rot.index(dart[0]) - 1], v)

    def trace(self, dart: Dart) -> List[Dart]:
        darts = [dart]
        cur = self.next_dart(dart)
        while cur != dart:
            darts.append(cur)
            cur = self.next_dart(cur)
        return darts

    def darts(self) -> List[Dart]:
        result = []
        for eid in sorted(self.edges):
            u, v = self.edges[eid]
            result.extend([(eid, u), (eid, v)])
        return result

    def faces(self) -> List[List[Dart]]:
        seen: Set[Dart] = set()
        result = []
        for dart in self.darts():
            if dart not in seen:
                face = self.trace(dart)
                seen.update(face)
                result.append(face)
        return result

    def face_index(self) -> Dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces()) for d in f}

    def edge_between(self, u: str, v: str) -> Optional[str]:
        for e in self.rot[u]:
            if self.other_end(e, u) == v:
                return e
        return None

    def neighbors(self, v: str) -> List[str]:
        return [self.other_end(e, v) for e in self.rot[v]]

    # -- editing ----------------------------------------------------------

    def add_vertex(self, v: str) -> None:
        if v in self.rot:
            raise InconsistentRotation(f"Vertex {v} already exists", witness=v)
        self.vertices.append(v)
        self.rot[v] = []

    def _new_edge(self, eid: str, u: str, v: str) -> None:
        if eid in self.edges:
            raise InconsistentRotation(f"Edge {eid} already exists", witness=eid)
        if u == v:
            raise SelfLoop(f"Edge {eid} joins {u} to itself", witness=eid)
        self.edges[eid] = (u, v)

    def insert_chord(self, eid: str, face: Sequence[Dart], i: int, j: int) -> None:
        """
        Add edge eid from the tail of face[i] to the tail of face[j] inside that face.

        The new edge goes into each endpoint's rotation just before the arriving face edge.
        """
        u = face[i][1]
        v = face[j][1]
        arrive_u = face[i - 1][0]
        arrive_v = face[j - 1][0]
        self._new_edge(eid, u, v)
        self.rot[u].insert(self.rot[u].index(arrive_u), eid)
        self.rot[v].insert(self.rot[v].index(arrive_v), eid)

    def add_pendant(self, eid: str, new_vertex: str, face: Sequence[Dart], i: int) -> None:
        """Add a new vertex inside face joined to the tail of face[i]."""
        u = face[i][1]
        arrive = face[i - 1][0]
        self.add_vertex(new_vertex)
        self._new_edge(eid, u, new_vertex)
        self.rot[u].insert(self.rot[u].index(arrive), eid)
        self.rot[new_vertex] = [eid]

    def subdivide(self, eid: str, mid: str, first: str, second: str) -> None:
        """Replace edge eid = (u, v) by first = (u, mid) and second = (mid, v)."""
        u, v = self.edges.pop(eid)
        self.add_vertex(mid)
        self.edges[first] = (u, mid)
        self.edges[second] = (mid, v)
        self.rot[u][self.rot[u].index(eid)] = first
        self.rot[v][self.rot[v].index(eid)] = second
        self.rot[mid] = [second, first]
        if self.outer is not None and self.outer[0] == eid:
            self.outer = (first, u) if self.outer[1] == u else (second, v)

    def delete(self, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> None:
        """
        Remove vertices (with their edges) and edges, keeping track of the outer face.

        The new outer face is the face of the result containing the old outer region.
        """
        dead_v = set(vertices)
        dead_e = set(edges)
        for v in dead_v:
            dead_e.update(self.rot[v])
        if not dead_e and not dead_v:
            return

        new_outer = self.outer
        if self.outer is not None:
            index = self.face_index()
            merged = nx.utils.UnionFind(set(index.values()))
            for eid in dead_e:
                u, v = self.edges[eid]
                merged.union(index[(eid, u)], index[(eid, v)])
            target = merged[index[self.outer]]
            new_outer = None
            for dart, fi in sorted(index.items()):
                if dart[0] not in dead_e and merged[fi] == target:
                    new_outer = dart
                    break

        for eid in dead_e:
            u, v = self.edges.pop(eid)
            if u in self.rot:
                self.rot[u].remove(eid)
            if v in self.rot:
                self.rot[v].remove(eid)
        for v in dead_v:
            del self.rot[v]
        self.vertices = [v for v in self.vertices if v not in dead_v]
        self.outer = new_outer

    def contract(self, eid: str, survivor: Optional[str] = None) -> ContractionRecord:
        """
        Contract edge eid, merging the other endpoint into survivor.

        Parallel edges produced by the contraction are merged (the survivor's copy is kept)
        provided they bound an empty 2-gon; otherwise NotContractible is raised and the
        rotation system is left untouched.
        """
        a, b = self.edges[eid]
        if a == b:
            raise SelfLoop(f"Edge {eid} is a self-loop", witness=eid)
        u = survivor if survivor is not None else a
        if u not in (a, b):
            raise InconsistentRotation(f"{u} is not an endpoint of {eid}", witness=eid)
        v = b if u == a else a

        touched = {u, v} | set(self.neighbors(v))
        record = ContractionRecord(
            contracted_edge=eid,
            survivor=u,
            removed=v,
            removed_rotation=list(self.rot[v]),
            edge_ends=(a, b),
            saved_edges={e: self.edges[e] for e in self.rot[v]},
            saved_rotations={w: list(self.rot[w]) for w in touched},
            saved_outer=self.outer,
            vertex_index=self.vertices.index(v),
        )

        rot_u = self.rot[u]
        rot_v = self.rot[v]
        k = rot_v.index(eid)
        after = rot_v[k + 1 :] + rot_v[:k]
        i = rot_u.index(eid)
        merged = rot_u[:i] + after + rot_u[i + 1 :]

        # pair up parallels: v-side edge -> u-side edge
        u_nbr = {self.other_end(e, u): e for e in rot_u if e != eid}
        merges = []
        for e in after:
            w = self.other_end(e, v)
            if w in u_nbr:
                merges.append((e, u_nbr[w], w))

        for e_v, e_u, w in merges:
            pos_v, pos_u = merged.index(e_v), merged.index(e_u)
            rw = self.rot[w]
            adjacent_u = abs(pos_v - pos_u) in (1, len(merged) - 1)
            adjacent_w = abs(rw.index(e_v) - rw.index(e_u)) in (1, len(rw) - 1)
            if not (adjacent_u and adjacent_w):
                raise NotContractible(
                    f"Contracting {eid} would merge {e_v} and {e_u} around a non-empty region",
                    witness=eid,
                )

        old_outer_face = self.trace(self.outer) if self.outer is not None else []

        for e in after:
            x, y = self.edges[e]
            self.edges[e] = (u if x == v else x, u if y == v else y)
        del self.edges[eid]
        self.rot[u] = merged
        del self.rot[v]
        self.vertices.remove(v)
        for e_v, e_u, w in merges:
            self.rot[u].remove(e_v)
            self.rot[w].remove(e_v)
            del self.edges[e_v]
            record.multi_edge_merges.append((e_v, e_u))

        if self.outer is not None:
            self.outer = None
            for e, tail in old_outer_face:
                if e in self.edges:
                    self.outer = (e, u if tail == v else tail)
                    break
        return record

    def uncontract(self, record: ContractionRecord) -> None:
        """Undo a contraction recorded by contract()."""
        v = record.removed
        for e_v, _ in record.multi_edge_merges:
            self.edges[e_v] = record.saved_edges[e_v]
        for e, ends in record.saved_edges.items():
            self.edges[e] = ends
        self.vertices.insert(record.vertex_index, v)
        for w, rot in record.saved_rotations.items():
            self.rot[w] = list(rot)
        self.outer = record.saved_outer

    def freeze(self, allow_multi: bool = False) -> EmbeddedGraph:
        return build_embedding(self.vertices, self.rot, self.edges, self.outer, allow_multi)


def build_embedding(
    vertices: Sequence[str],
    rotation: Mapping[str, Sequence[str]],
    edges: Mapping[str, Tuple[str, str]],
    outer_face: Optional[Dart],
    allow_multi: bool = False,
    require_outer: bool = True,
) -> EmbeddedGraph:
    """
    Validate a rotation system and build an EmbeddedGraph.

    With require_outer=False the outer face may be left unset, for callers that pick it
    from the faces of the result.

    Raises:
        SelfLoop: If an edge joins a vertex to itself
        InconsistentRotation: If rotations and edges disagree
        NotPlanarRotation: If the graph is disconnected or fails the Euler check
    """
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise InconsistentRotation("Duplicate vertex ids")
    incident: Dict[str, List[str]] = defaultdict(list)
    pairs: Set[frozenset] = set()
    for eid, (a, b) in edges.items():
        if a not in vset or b not in vset:
            raise InconsistentRotation(f"Edge {eid} has an unknown endpoint", witness=eid)
        if a == b:
            raise SelfLoop(f"Edge {eid} joins {a} to itself", witness=eid)
        key = frozenset((a, b))
        if key in pairs and not allow_multi:
            raise InconsistentRotation(
                f"Edge {eid} duplicates an edge between {a} and {b}", witness=eid
            )
        pairs.add(key)
        incident[a].append(eid)
        incident[b].append(eid)

    for v in vertices:
        rot = list(rotation.get(v, ()))
        if sorted(rot) != sorted(incident[v]):
            missing = set(incident[v]) ^ set(rot)
            raise InconsistentRotation(
                f"Rotation at {v} does not list its incident edges exactly once: {sorted(missing)}",
                witness=v,
            )

    nxg = nx.MultiGraph()
    nxg.add_nodes_from(vertices)
    nxg.add_edges_from(edges.values())
    if vertices and not nx.is_connected(nxg):
        raise NotPlanarRotation("Graph is disconnected")

    g = EmbeddedGraph(
        vertices=tuple(vertices),
        edges=dict(edges),
        rotation={v: tuple(rotation.get(v, ())) for v in vertices},
        outer=tuple(outer_face) if outer_face is not None else None,  # type: ignore[arg-type]
    )
    n_faces = len(g.faces) if edges else 1
    if len(vertices) - len(edges) + n_faces != 2:
        raise NotPlanarRotation(
            f"Euler check failed: V={len(vertices)} E={len(edges)} F={n_faces}"
        )
    if edges and (require_outer or outer_face is not None):
        if g.outer is None or g.outer not in g.face_of:
            raise InconsistentRotation(f"Outer dart {outer_face} is not a dart of the graph")
    return g


def faces(g: EmbeddedGraph) -> List[Face]:
    """All faces of g; every dart is covered exactly once."""
    return list(g.faces)


def contract(
    g: EmbeddedGraph, eid: str, survivor: Optional[str] = None
) -> Tuple[EmbeddedGraph, ContractionRecord]:
    """Contract an edge; parallel edges created by the contraction are merged and recorded."""
    rs = RotationSystem.from_graph(g)
    record = rs.contract(eid, survivor)
    return rs.freeze(), record


def uncontract(g: EmbeddedGraph, record: ContractionRecord) -> EmbeddedGraph:
    """Replay a contraction record backwards."""
    rs = RotationSystem.from_graph(g)
    rs.uncontract(record)
    return rs.freeze()


def triangles(g: EmbeddedGraph) -> List[Triangle]:
    """All vertex triples that are pairwise adjacent, as sorted tuples."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    found = set()
    for eid, (a, b) in g.edges.items():
        for c in adj[a] & adj[b]:
            found.add(tuple(sorted((a, b, c))))
    return sorted(found)  # type: ignore[arg-type]


def facial_triangles(g: EmbeddedGraph) -> Set[Triangle]:
    return {
        tuple(sorted(f.vertices))  # type: ignore[misc]
        for f in g.faces
        if len(f) == 3 and len(set(f.vertices)) == 3
    }


def separating_triangles(g: EmbeddedGraph) -> List[Triangle]:
    """Triangles that are not face boundaries."""
    facial = facial_triangles(g)
    return [t for t in triangles(g) if t not in facial]


def cycle_sides(g: EmbeddedGraph, cycle: Sequence[str]) -> Tuple[Set[str], Set[str]]:
    """Split the vertices off a simple cycle into those left and right of it."""
    n = len(cycle)
    tri_edges = []
    for i in range(n):
        e = g.edge_between(cycle[i], cycle[(i + 1) % n])
        if e is None:
            raise NotSeparating(f"{tuple(cycle)} is not a cycle", witness=tuple(cycle))
        tri_edges.append(e)

    seeds: Set[str] = set()
    for i in range(n):
        v = cycle[(i + 1) % n]
        e_in = tri_edges[i]
        e_out = tri_edges[(i + 1) % n]
        rot = list(g.rotation[v])
        k = rot.index(e_out)
        rot = rot[k:] + rot[:k]
        # ccw from the outgoing edge up to the incoming one lies on the left
        for e in rot[1 : rot.index(e_in)]:
            seeds.add(g.other_end(e, v))
    on_cycle = set(cycle)
    seeds -= on_cycle

    rest = nx.Graph()
    rest.add_nodes_from(v for v in g.vertices if v not in on_cycle)
    rest.add_edges_from(
        (a, b) for a, b in g.edges.values() if a not in on_cycle and b not in on_cycle
    )
    left: Set[str] = set()
    for s in seeds:
        if s not in left:
            left |= nx.node_connected_component(rest, s)
    right = set(rest.nodes) - left
    return left, right


def _sub_embedding(g: EmbeddedGraph, keep: Set[str], outer: Dart) -> EmbeddedGraph:
    edges = {e: ends for e, ends in g.edges.items() if ends[0] in keep and ends[1] in keep}
    rotation = {v: [e for e in g.rotation[v] if e in edges] for v in g.vertices if v in keep}
    return build_embedding([v for v in g.vertices if v in keep], rotation, edges, outer)


def split_at_triangle(g: EmbeddedGraph, t: Triangle) -> Tuple[EmbeddedGraph, EmbeddedGraph]:
    """
    Split g at a separating triangle.

    Returns:
        (inner, outer); both contain t and share exactly its vertices. inner is the side
        away from g's outer face and has t as its outer face.

    Raises:
        NotSeparating: If t is not a separating triangle of g
    """
    left, right = cycle_sides(g, t)
    if not left or not right:
        raise NotSeparating(f"Triangle {t} is not separating", witness=t)
    outer_vertices = set(g.outer_face.vertices) - set(t) if g.outer_face else set()
    inner_is_left = not (outer_vertices & left)
    inner_side = left if inner_is_left else right
    outer_side = right if inner_is_left else left

    e01 = g.edge_between(t[0], t[1])
    assert e01 is not None
    # the inner part's outer face lies on the side facing away from inner_side
    inner_outer: Dart = (e01, t[1]) if inner_is_left else (e01, t[0])
    inner = _sub_embedding(g, inner_side | set(t), inner_outer)
    outer = _sub_embedding(g, outer_side | set(t), g.outer)  # type: ignore[arg-type]
    return inner, outer


def reglue(inner: EmbeddedGraph, outer: EmbeddedGraph) -> EmbeddedGraph:
    """Inverse of split_at_triangle."""
    shared = set(inner.vertices) & set(outer.vertices)
    if len(shared) != 3:
        raise NotSeparating(f"Parts share {len(shared)} vertices, expected 3")
    tri_edges = {e for e, (a, b) in inner.edges.items() if a in shared and b in shared}

    rotation: Dict[str, List[str]] = {}
    for v in outer.vertices:
        rotation[v] = list(outer.rotation[v])
    for v in inner.vertices:
        if v not in shared:
            rotation[v] = list(inner.rotation[v])
    for v in shared:
        rin = list(inner.rotation[v])
        rout = list(outer.rotation[v])
        start = next(
            (
                i
                for i, e in enumerate(rin)
                if e in tri_edges and rin[(i + 1) % len(rin)] not in tri_edges
            ),
            None,
        )
        if start is None:
            rotation[v] = rout
            continue
        rin = rin[start:] + rin[:start]
        closing = rin[-1]
        j = rout.index(closing)
        rout = rout[j:] + rout[:j]
        rotation[v] = rin + rout[1:-1]

    edges = dict(outer.edges)
    edges.update(inner.edges)
    vertices = list(outer.vertices) + [v for v in inner.vertices if v not in shared]
    return build_embedding(vertices, rotation, edges, outer.outer)
