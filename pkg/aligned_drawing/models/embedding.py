"""Combinatorial embedding types: darts, faces, embedded graphs and contraction records."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Tuple

# A dart is an edge traversed away from a given tail vertex.
Dart = Tuple[str, str]


@dataclass(frozen=True)
class Face:
    """A face traced counterclockwise (the face lies to the left of each dart)."""

    darts: Tuple[Dart, ...]

    @property
    def id(self) -> Dart:
        """Canonical face id: the smallest dart on the boundary."""
        return min(self.darts)

    @property
    def vertices(self) -> List[str]:
        return [tail for _, tail in self.darts]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class EmbeddedGraph:
    """
    A connected plane graph given by a rotation system.

    Attributes:
        vertices: Vertex ids in a stable order
        edges: Edge id -> (tail, head)
        rotation: Vertex id -> incident edge ids in counterclockwise order (cyclic)
        outer: A dart whose left face is the outer face (None for a single vertex)
    """

    vertices: Tuple[str, ...]
    edges: Mapping[str, Tuple[str, str]]
    rotation: Mapping[str, Tuple[str, ...]]
    outer: Optional[Dart] = None

    def other_end(self, eid: str, v: str) -> str:
        a, b = self.edges[eid]
        return b if v == a else a

    def head(self, dart: Dart) -> str:
        return self.other_end(dart[0], dart[1])

    def next_dart(self, dart: Dart) -> Dart:
        """Next dart along the face to the left of dart."""
        eid, _ = dart
        v = self.head(dart)
        rot = self.rotation[v]
        nxt = rot[rot.index(eid) - 1]
        return (nxt, v)

    def trace(self, dart: Dart) -> Face:
        darts = [dart]
        cur = self.next_dart(dart)
        while cur != dart:
            darts.append(cur)
            cur = self.next_dart(cur)
        return Face(tuple(darts))

    @cached_property
    def faces(self) -> List[Face]:
        seen: set = set()
        result: List[Face] = []
        for eid in sorted(self.edges):
            u, v = self.edges[eid]
            for dart in ((eid, u), (eid, v)):
                if dart in seen:
                    continue
                face = self.trace(dart)
                seen.update(face.darts)
                result.append(face)
        return result

    @cached_property
    def face_of(self) -> Dict[Dart, Face]:
        return {d: f for f in self.faces for d in f.darts}

    @property
    def outer_face(self) -> Optional[Face]:
        return self.face_of[self.outer] if self.outer is not None else None

    def neighbors(self, v: str) -> List[str]:
        return [self.other_end(e, v) for e in self.rotation[v]]

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def edge_between(self, u: str, v: str) -> Optional[str]:
        for e in self.rotation[u]:
            if self.other_end(e, u) == v:
                return e
        return None

    def canonical_rotation(self, v: str) -> Tuple[str, ...]:
        rot = self.rotation[v]
        if not rot:
            return ()
        i = rot.index(min(rot))
        return tuple(rot[i:]) + tuple(rot[:i])

    def equivalent(self, other: "EmbeddedGraph") -> bool:
        """Same vertices, edges, cyclic rotations and outer face."""
        if set(self.vertices) != set(other.vertices) or dict(self.edges) != dict(other.edges):
            return False
        if any(self.canonical_rotation(v) != other.canonical_rotation(v) for v in self.vertices):
            return False
        mine = self.outer_face.id if self.outer_face else None
        theirs = other.outer_face.id if other.outer_face else None
        return mine == theirs


@dataclass
class ContractionRecord:
    """Everything needed to undo one edge contraction exactly."""

    contracted_edge: str
    survivor: str
    removed: str
    removed_rotation: List[str]
    edge_ends: Tuple[str, str]
    multi_edge_merges: List[Tuple[str, str]] = field(default_factory=list)
    saved_edges: Dict[str, Tuple[str, str]] = field(default_factory=dict)
    saved_rotations: Dict[str, List[str]] = field(default_factory=dict)
    saved_outer: Optional[Dart] = None
    vertex_index: int = 0
