"""Concrete drawings: exact coordinates plus the straight-line arrangement they live on."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

from aligned_drawing.models.geometry import Point, to_rat


@dataclass(frozen=True)
class StarGeometry:
    """Ray directions 0..2k-1 counterclockwise; ray j+k points opposite to ray j."""

    directions: Tuple[Point, ...]

    def __post_init__(self):
        if len(self.directions) < 4 or len(self.directions) % 2:
            raise ValueError(
                f"A star needs an even number >= 4 of rays, got {len(self.directions)}"
            )
        for d in self.directions:
            if d.x == 0 and d.y == 0:
                raise ValueError("Ray directions must be non-zero")

    @property
    def k(self) -> int:
        return len(self.directions) // 2

    def direction(self, ray: int) -> Point:
        return self.directions[ray % len(self.directions)]


@dataclass(frozen=True)
class ParallelGeometry:
    """Horizontal layers at the given heights, bottom to top."""

    ys: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "ys", tuple(to_rat(y) for y in self.ys))
        if not self.ys:
            raise ValueError("A parallel arrangement needs at least one layer")

    @property
    def m(self) -> int:
        return len(self.ys)


Geometry = Union[StarGeometry, ParallelGeometry]


@dataclass
class Drawing:
    """Exact straight-line drawing of a graph on a line arrangement."""

    lines: Geometry
    coords: Dict[str, Point] = field(default_factory=dict)

    @property
    def is_star(self) -> bool:
        return isinstance(self.lines, StarGeometry)

    def at(self, v: str) -> Point:
        return self.coords[v]

    def with_point(self, v: str, p: Point) -> "Drawing":
        coords = dict(self.coords)
        coords[v] = p
        return Drawing(self.lines, coords)

    def without(self, vertices: Iterable[str]) -> "Drawing":
        drop = set(vertices)
        return Drawing(self.lines, {v: p for v, p in self.coords.items() if v not in drop})

    def restricted(self, vertices: Iterable[str]) -> "Drawing":
        keep = set(vertices)
        return Drawing(self.lines, {v: p for v, p in self.coords.items() if v in keep})

    def scaled(self, factor: Fraction) -> "Drawing":
        """Uniform scaling about the origin (star) or of the whole plane (parallel)."""
        f = to_rat(factor)
        lines: Geometry = self.lines
        if isinstance(lines, ParallelGeometry):
            lines = ParallelGeometry(tuple(y * f for y in lines.ys))
        return Drawing(lines, {v: p.scale(f) for v, p in self.coords.items()})
