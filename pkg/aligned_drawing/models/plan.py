"""Lift plans: journals of reduction steps, replayed backwards on drawings."""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple, Union

from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.embedding import ContractionRecord


@dataclass(frozen=True)
class Uncontract:
    """
    Undo an edge contraction.

    Attributes:
        record: Rotation-system record of the contraction
        before: The instance as it was before the contraction
        track: Track of the contracted edge for aligned contractions, else None
    """

    record: ContractionRecord
    before: AlignedGraph
    track: Optional[int] = None

    @property
    def removed(self) -> str:
        return self.record.removed

    @property
    def survivor(self) -> str:
        return self.record.survivor


@dataclass(frozen=True)
class ReinsertSubgraph:
    """
    Put back the interior of a separating triangle.

    A split-off interior is given as inner, with the triangle as outer face, and comes
    back at barycentres. A collapsed interior is given as plan, the contractions that
    emptied the triangle; replaying it never moves a corner.
    """

    triangle: Tuple[str, str, str]
    inner: Optional[AlignedGraph] = None
    plan: Optional["LiftPlan"] = None


@dataclass(frozen=True)
class RemoveGadget:
    """Vertices and edges added by a step that the lift simply forgets."""

    vertices: Tuple[str, ...] = ()
    edges: Tuple[str, ...] = ()
    reason: str = ""


@dataclass(frozen=True)
class RestoreSeparatingEdge:
    """
    A separating edge uv replaced by the quadrangle u, w1, v, w2.

    w1 lies on the side of uv facing the origin. For a crossed uv, w1v and w2v cross the
    same track as uv, on either side of it.
    """

    edge: str
    tail: str
    head: str
    w1: str
    w2: str
    edges: Tuple[str, str, str, str]
    track: Optional[int] = None


@dataclass(frozen=True)
class DropOuterCycle:
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]


@dataclass(frozen=True)
class DropOriginGadget:
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]


@dataclass(frozen=True)
class DropInsertedPseudolines:
    """
    Layers added by pseudoline insertion.

    original lists, for each layer of the input arrangement, its index in the enlarged one.
    """

    original: Tuple[int, ...]
    size: int

    @property
    def inserted(self) -> Tuple[int, ...]:
        kept = set(self.original)
        return tuple(i for i in range(self.size) if i not in kept)


LiftStep = Union[
    Uncontract,
    ReinsertSubgraph,
    RemoveGadget,
    RestoreSeparatingEdge,
    DropOuterCycle,
    DropOriginGadget,
    DropInsertedPseudolines,
]


@dataclass
class LiftPlan:
    """Ordered journal; lifting replays it last step first."""

    steps: List[LiftStep] = field(default_factory=list)

    def append(self, step: LiftStep) -> None:
        self.steps.append(step)

    def extend(self, other: "LiftPlan") -> "LiftPlan":
        self.steps.extend(other.steps)
        return self

    def of_type(self, kind: type) -> List[LiftStep]:
        return [s for s in self.steps if isinstance(s, kind)]

    def __iter__(self) -> Iterator[LiftStep]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ReducedStarTriangulation:
    """
    A reduced star instance ready for draw_reduced_star.

    origin is the vertex o; outer_cycle lists the outer 2k-cycle by ray.
    """

    ag: AlignedGraph
    origin: str
    outer_cycle: Tuple[str, ...]
