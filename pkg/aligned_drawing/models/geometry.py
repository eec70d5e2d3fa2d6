"""Exact geometric value types: points, half-planes, linear systems and result records."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


def to_rat(value: RatLike) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction, rejecting floats."""
    if isinstance(value, float):
        raise TypeError(f"Floating point value not allowed in exact geometry: {value!r}")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Point:
    """A point with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_rat(self.x))
        object.__setattr__(self, "y", to_rat(self.y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scale(self, factor: RatLike) -> "Point":
        """Multiply both coordinates by a rational factor."""
        f = to_rat(factor)
        return Point(self.x * f, self.y * f)

    def dot(self, other: "Point") -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> Fraction:
        return self.x * other.y - self.y * other.x

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


ORIGIN = Point(0, 0)


class Orientation(Enum):
    """Sign of the orientation determinant."""

    LEFT = 1
    RIGHT = -1
    COLLINEAR = 0


class CrossKind(Enum):
    """Classification of two closed segments."""

    NONE = "none"
    PROPER = "proper"
    TOUCH = "touch"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class SegmentCrossing:
    """Result of segment_cross; point is set for PROPER and TOUCH."""

    kind: CrossKind
    point: Optional[Point] = None


@dataclass(frozen=True)
class HalfPlane:
    """Half-plane {p : a*px + b*py + c > 0} (strict) or >= 0."""

    a: Fraction
    b: Fraction
    c: Fraction
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", to_rat(self.a))
        object.__setattr__(self, "b", to_rat(self.b))
        object.__setattr__(self, "c", to_rat(self.c))
        if self.a == 0 and self.b == 0:
            raise ValueError("Half-plane normal (a, b) must be non-zero")

    def value(self, p: Point) -> Fraction:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        v = self.value(p)
        return v > 0 if self.strict else v >= 0

    @classmethod
    def left_of(cls, p: Point, q: Point, strict: bool = True) -> "HalfPlane":
        """Half-plane to the left of the directed line through p and q."""
        dx = q.x - p.x
        dy = q.y - p.y
        return cls(-dy, dx, dy * p.x - dx * p.y, strict)

    @classmethod
    def side_of(cls, p: Point, q: Point, witness: Point, strict: bool = True) -> "HalfPlane":
        """Half-plane bounded by line(p, q) containing witness (witness must be off the line)."""
        h = cls.left_of(p, q, strict)
        if h.value(witness) > 0:
            return h
        if h.value(witness) == 0:
            raise ValueError(f"Witness {witness} lies on the line through {p} and {q}")
        return cls(-h.a, -h.b, -h.c, strict)


class Relation(Enum):
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class LinRow:
    """One linear constraint: coefficients . x (>= | =) rhs."""

    coefficients: Sequence[Fraction]
    rhs: Fraction
    relation: Relation = Relation.GE

    def evaluate(self, assignment: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coefficients, assignment)), Fraction(0))

    def satisfied_by(self, assignment: Sequence[Fraction]) -> bool:
        lhs = self.evaluate(assignment)
        if self.relation is Relation.EQ:
            return lhs == self.rhs
        return lhs >= self.rhs


@dataclass
class LinSystem:
    """A system of linear constraints over free (sign-unrestricted) variables."""

    variables: int
    rows: List[LinRow] = field(default_factory=list)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row.coefficients) != self.variables:
                raise ValueError(
                    f"Row {i} has {len(row.coefficients)} coefficients, expected {self.variables}"
                )

    def add(
        self, coefficients: Sequence[RatLike], rhs: RatLike, relation: Relation = Relation.GE
    ) -> None:
        """Append a row, checking its width."""
        if len(coefficients) != self.variables:
            raise ValueError(
                f"Row has {len(coefficients)} coefficients, expected {self.variables}"
            )
        self.rows.append(LinRow([to_rat(c) for c in coefficients], to_rat(rhs), relation))

    def subsystem(self, indices: Sequence[int]) -> "LinSystem":
        return LinSystem(self.variables, [self.rows[i] for i in indices])


class RegionKind(Enum):
    EMPTY = "empty"
    POLYGON = "polygon"
    UNBOUNDED = "unbounded"
    SEGMENT = "segment"
    POINT = "point"


@dataclass(frozen=True)
class Region:
    """Intersection of half-planes; vertices are ccw, starting at the lexicographic minimum."""

    kind: RegionKind
    vertices: List[Point] = field(default_factory=list)


@dataclass(frozen=True)
class LpResult:
    """Outcome of lp_feasible: an assignment or an infeasible witness row subset."""

    feasible: bool
    assignment: Optional[List[Fraction]] = None
    witness: Optional[List[int]] = None
