"""Error hierarchy for aligned-graph construction, reduction, drawing and verification."""

from typing import Any, Optional


class AlignedError(Exception):
    """Base class for all library errors.

    Attributes:
        witness: Optional id (or tuple of ids) pinpointing the offending element.
    """

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


# Grouping bases used by the CLI to choose exit codes.
class GeometryError(AlignedError):
    """Exact geometry failure."""


class EmbeddingError(AlignedError):
    """Invalid or unsupported combinatorial embedding."""


class AnnotationError(AlignedError):
    """Invalid alignment annotation or unknown instance."""


class ReductionError(AlignedError):
    """A reduction step cannot be applied."""


class DrawingError(AlignedError):
    """Geometric construction failed."""


class VerificationError(AlignedError):
    """Verifier input does not match the expected instance."""


class DegenerateSegment(GeometryError):
    """A segment has equal endpoints."""


class ZeroArea(GeometryError):
    """A polygon (or linear system) is degenerate."""


class NotPlanarRotation(EmbeddingError):
    """Rotation system fails the Euler check."""


class InconsistentRotation(EmbeddingError):
    """An edge is missing from (or repeated in) a rotation."""


class SelfLoop(EmbeddingError):
    """An edge would join a vertex to itself."""


class NotSeparating(EmbeddingError):
    """A triangle is not separating."""


class NotContractible(EmbeddingError):
    """An edge cannot be contracted without breaking simplicity or the annotation."""


class InconsistentAnnotation(AnnotationError):
    """A cross-consistency check on an aligned graph failed."""


class NotCcwAligned(AnnotationError):
    """A 1-anchored 1-crossed edge would need a free source."""


class ComplexityExceeded(AnnotationError):
    """Alignment complexity is above what the operation supports."""


class UnknownInstance(AnnotationError):
    """No built-in instance with this name."""


class CannotTriangulate(ReductionError):
    """Face-local triangulation failed validation."""


class OriginUnsupported(ReductionError):
    """The origin configuration is not handled by the origin gadgets."""


class UnsupportedNesting(ReductionError):
    """A separating triangle with crossed interior remains."""


class PreconditionFailed(ReductionError):
    """A pipeline precondition does not hold."""


class DegenerateEdge(ReductionError):
    """A non-aligned edge has both endpoints on the same pseudoline."""


class DegenerateParallelEdge(DegenerateEdge):
    """A non-aligned edge has both endpoints on the same layer."""


class EmptyPlacementRegion(DrawingError):
    """The admissible region for a free vertex is empty."""


class OrderingConflict(DrawingError):
    """Computed crossing parameters violate the order along a line."""


class LpInfeasible(DrawingError):
    """The straightening LP has no solution."""


class LiftFailed(DrawingError):
    """No epsilon yields a locally valid uncontraction."""


class WrongInstance(VerificationError):
    """The drawing does not belong to the expected instance."""
