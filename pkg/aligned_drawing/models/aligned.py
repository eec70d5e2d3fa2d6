"""Aligned-graph data model: arrangements, placements, crossing annotations, combs."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from aligned_drawing.models.embedding import EmbeddedGraph

# An item on a ray or layer: ("v", vertex id) or ("x", edge id).
Item = Tuple[str, str]


def vertex_item(vid: str) -> Item:
    return ("v", vid)


def crossing_item(eid: str) -> Item:
    return ("x", eid)


class ArrKind(Enum):
    STAR = "star"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class Arrangement:
    """
    Combinatorial arrangement.

    Star(k): rays 0..2k-1 counterclockwise, pseudoline i = rays {i, i+k}; cell Q_i lies
    between ray i (its right boundary) and ray i+1.
    Parallel(m): layers 0..m-1 bottom to top; cell C_l lies below layer l, C_m on top.

    Rays and layers are both called tracks below. Each track has a left side (the cell
    counterclockwise of a ray, the cell above a layer) and a right side.
    """

    kind: ArrKind
    size: int

    def __post_init__(self):
        if self.kind is ArrKind.STAR and self.size < 2:
            raise ValueError(f"Star arrangement needs k >= 2, got {self.size}")
        if self.kind is ArrKind.PARALLEL and self.size < 1:
            raise ValueError(f"Parallel arrangement needs m >= 1, got {self.size}")

    @classmethod
    def star(cls, k: int) -> "Arrangement":
        return cls(ArrKind.STAR, k)

    @classmethod
    def parallel(cls, m: int) -> "Arrangement":
        return cls(ArrKind.PARALLEL, m)

    @property
    def is_star(self) -> bool:
        return self.kind is ArrKind.STAR

    @property
    def n_tracks(self) -> int:
        return 2 * self.size if self.is_star else self.size

    @property
    def n_cells(self) -> int:
        return 2 * self.size if self.is_star else self.size + 1

    @property
    def n_lines(self) -> int:
        return self.size

    def line_of(self, track: int) -> int:
        """Pseudoline index carrying a track."""
        return track % self.size if self.is_star else track

    def left_cell(self, track: int) -> int:
        return track if self.is_star else track + 1

    def right_cell(self, track: int) -> int:
        return (track - 1) % self.n_tracks if self.is_star else track

    def bounds(self, track: int, cell: int) -> bool:
        """Whether the track is on the boundary of the cell."""
        return cell in (self.left_cell(track), self.right_cell(track))

    def across(self, track: int, cell: int) -> Optional[int]:
        """Cell reached by crossing track from cell, or None if track does not bound cell."""
        if cell == self.left_cell(track):
            return self.right_cell(track)
        if cell == self.right_cell(track):
            return self.left_cell(track)
        return None

    def shared_cell(self, t1: int, t2: int) -> Optional[int]:
        """The unique cell bounded by two distinct adjacent tracks, if any."""
        common = {self.left_cell(t1), self.right_cell(t1)} & {
            self.left_cell(t2),
            self.right_cell(t2),
        }
        return common.pop() if len(common) == 1 else None

    def __str__(self) -> str:
        return f"{self.kind.value}({self.size})"


class PlacementKind(Enum):
    ORIGIN = "origin"
    RAY = "ray"
    LAYER = "layer"
    CELL = "cell"


@dataclass(frozen=True)
class Placement:
    """Where a vertex sits. rank counts from 1 outward (ray) or left to right (layer)."""

    kind: PlacementKind
    index: Optional[int] = None
    rank: Optional[int] = None

    @classmethod
    def origin(cls) -> "Placement":
        return cls(PlacementKind.ORIGIN)

    @classmethod
    def on_ray(cls, ray: int, rank: Optional[int] = None) -> "Placement":
        return cls(PlacementKind.RAY, ray, rank)

    @classmethod
    def on_layer(cls, layer: int, rank: Optional[int] = None) -> "Placement":
        return cls(PlacementKind.LAYER, layer, rank)

    @classmethod
    def in_cell(cls, cell: int) -> "Placement":
        return cls(PlacementKind.CELL, cell)

    @property
    def on_track(self) -> bool:
        return self.kind in (PlacementKind.RAY, PlacementKind.LAYER)

    @property
    def is_free(self) -> bool:
        return self.kind is PlacementKind.CELL

    @property
    def is_origin(self) -> bool:
        return self.kind is PlacementKind.ORIGIN

    def with_rank(self, rank: Optional[int]) -> "Placement":
        return Placement(self.kind, self.index, rank)

    def unranked(self) -> "Placement":
        return Placement(self.kind, self.index, None)


@dataclass(frozen=True)
class Crossing:
    """A crossing of an edge's interior with a track; rank is derived from the track order."""

    track: int
    rank: Optional[int] = None


@dataclass(frozen=True)
class CrossingSpec:
    """
    Per-edge annotation.

    Attributes:
        crossings: Tracks crossed, in order from tail to head
        aligned: The edge lies on one pseudoline
        side: Cell entered by an uncrossed edge whose endpoints share a track
    """

    crossings: Tuple[Crossing, ...] = ()
    aligned: bool = False
    side: Optional[int] = None

    @property
    def tracks(self) -> List[int]:
        return [c.track for c in self.crossings]

    def reversed(self) -> "CrossingSpec":
        return CrossingSpec(tuple(reversed(self.crossings)), self.aligned, self.side)

    def unranked(self) -> "CrossingSpec":
        bare = tuple(Crossing(c.track) for c in self.crossings)
        return CrossingSpec(bare, self.aligned, self.side)


class EdgeKind(Enum):
    FREE = "free"
    ALIGNED = "aligned"
    OTHER = "other"


@dataclass(frozen=True)
class EdgeClass:
    """Anchoredness (0-2), crossedness and kind of one edge."""

    anchored: int
    crossed: int
    kind: EdgeKind

    def __str__(self) -> str:
        if self.kind is EdgeKind.ALIGNED:
            return "aligned"
        if self.kind is EdgeKind.FREE:
            return "free"
        return f"{self.anchored}-anchored {self.crossed}-crossed"


Complexity = Tuple[Optional[int], Optional[int], Optional[int]]


def format_complexity(c: Complexity) -> str:
    """Render a complexity triple with "bot" for empty classes."""
    return "(" + ",".join("bot" if v is None else str(v) for v in c) + ")"


@dataclass
class AlignedGraph:
    """
    A plane graph together with an arrangement and its incidence annotations.

    Orders are the source of truth for ranks; placement and crossing ranks are derived
    from them by build_aligned. cells holds the derived cell sequence of every
    non-aligned edge (tail to head).
    """

    graph: EmbeddedGraph
    arr: Arrangement
    placement: Dict[str, Placement]
    crossings: Dict[str, CrossingSpec]
    orders: Dict[int, Tuple[Item, ...]]
    cells: Dict[str, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.graph.vertices

    @property
    def edges(self) -> Mapping[str, Tuple[str, str]]:
        return self.graph.edges

    def is_aligned_edge(self, eid: str) -> bool:
        return self.crossings[eid].aligned

    def origin_vertex(self) -> Optional[str]:
        for v, p in self.placement.items():
            if p.is_origin:
                return v
        return None

    def track_position(self, track: int, item: Item) -> int:
        """1-based rank of an item on a track."""
        return self.orders[track].index(item) + 1

    def vertices_on(self, track: int) -> List[str]:
        return [i for kind, i in self.orders[track] if kind == "v"]

    def free_vertices(self) -> List[str]:
        return [v for v in self.vertices if self.placement[v].is_free]

    def end_cell(self, eid: str, v: str) -> Optional[int]:
        """Cell the edge occupies next to endpoint v (None for aligned edges)."""
        seq = self.cells.get(eid, ())
        if not seq:
            return None
        return seq[0] if self.edges[eid][0] == v else seq[-1]


@dataclass
class Comb:
    """
    Region of a cell between two consecutive separating edges.

    inner / outer are None for the cell-boundary sentinels.
    """

    cell: int
    inner: Optional[str]
    outer: Optional[str]
    vertices: List[str] = field(default_factory=list)
    closed: bool = False


@dataclass(frozen=True)
class StructureReport:
    """Result of structure_check: ok, or the first violation with a witness."""

    ok: bool
    kind: Optional[str] = None
    witness: Optional[object] = None
