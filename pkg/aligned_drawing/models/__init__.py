"""Data models for aligned graphs and their drawings."""

from aligned_drawing.models.aligned import (
    AlignedGraph,
    Arrangement,
    Crossing,
    CrossingSpec,
    Placement,
)
from aligned_drawing.models.config import ToolConfig
from aligned_drawing.models.drawing import Drawing, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import Point
from aligned_drawing.models.plan import LiftPlan
from aligned_drawing.models.report import CounterexampleTrace, SearchResult, VerdictReport

__all__ = [
    "AlignedGraph",
    "Arrangement",
    "Crossing",
    "CrossingSpec",
    "Placement",
    "ToolConfig",
    "Drawing",
    "ParallelGeometry",
    "StarGeometry",
    "Point",
    "LiftPlan",
    "CounterexampleTrace",
    "SearchResult",
    "VerdictReport",
]
