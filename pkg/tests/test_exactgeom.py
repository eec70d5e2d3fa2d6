"""Tests for exact geometric predicates and LP feasibility."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aligned_drawing.core.exactgeom import (
    interior_point,
    line_intersection,
    lp_feasible,
    orient,
    polygon_area2,
    polygon_from_halfplanes,
    segment_cross,
    solve_linear,
)
from aligned_drawing.exceptions import DegenerateSegment, ZeroArea
from aligned_drawing.models.geometry import (
    CrossKind,
    HalfPlane,
    LinSystem,
    Orientation,
    Point,
    RegionKind,
    Relation,
    to_rat,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
points = st.builds(Point, rationals, rationals)


class TestToRat:
    """Test conversion to exact rationals."""

    def test_accepts_ints_strings_and_fractions(self):
        """Test the accepted input types."""
        assert to_rat(3) == Fraction(3)
        assert to_rat("-7/4") == Fraction(-7, 4)
        assert to_rat(Fraction(1, 3)) == Fraction(1, 3)

    def test_rejects_floats(self):
        """Test that floats never enter exact code."""
        with pytest.raises(TypeError):
            to_rat(0.5)  # type: ignore[arg-type]


class TestOrient:
    """Test the orientation predicate."""

    def test_left_right_collinear(self):
        """Test the three outcomes on simple points."""
        p, q = Point(0, 0), Point(1, 0)
        assert orient(p, q, Point(0, 1)) is Orientation.LEFT
        assert orient(p, q, Point(0, -1)) is Orientation.RIGHT
        assert orient(p, q, Point(5, 0)) is Orientation.COLLINEAR

    def test_tiny_rational_offsets(self):
        """Test that arbitrarily small offsets are still detected."""
        eps = Fraction(1, 10**30)
        assert orient(Point(0, 0), Point(1, 1), Point(1, 1 + eps)) is Orientation.LEFT

    @given(points, points, points)
    def test_antisymmetry(self, p, q, r):
        """Test that swapping two arguments flips the orientation."""
        assert orient(p, q, r).value == -orient(q, p, r).value

    @given(points, points, points)
    def test_cyclic_invariance(self, p, q, r):
        """Test that rotating the arguments keeps the orientation."""
        assert orient(p, q, r) is orient(q, r, p)


class TestSegmentCross:
    """Test segment classification."""

    def test_proper_crossing_point(self):
        """Test a proper crossing and its exact point."""
        res = segment_cross((Point(0, 0), Point(2, 2)), (Point(0, 2), Point(2, 0)))
        assert res.kind is CrossKind.PROPER
        assert res.point == Point(1, 1)

    def test_touch_at_endpoint(self):
        """Test two segments meeting at an endpoint of one of them."""
        res = segment_cross((Point(0, 0), Point(2, 0)), (Point(1, 0), Point(1, 3)))
        assert res.kind is CrossKind.TOUCH
        assert res.point == Point(1, 0)

    def test_collinear_overlap_and_gap(self):
        """Test collinear segments with and without a common piece."""
        a = (Point(0, 0), Point(2, 0))
        assert segment_cross(a, (Point(1, 0), Point(3, 0))).kind is CrossKind.OVERLAP
        assert segment_cross(a, (Point(3, 0), Point(4, 0))).kind is CrossKind.NONE
        assert segment_cross(a, (Point(2, 0), Point(4, 0))).kind is CrossKind.TOUCH

    def test_parallel_disjoint(self):
        """Test parallel segments that never meet."""
        res = segment_cross((Point(0, 0), Point(1, 0)), (Point(0, 1), Point(1, 1)))
        assert res.kind is CrossKind.NONE

    def test_degenerate_segment(self):
        """Test that a zero-length segment is rejected."""
        with pytest.raises(DegenerateSegment):
            segment_cross((Point(1, 1), Point(1, 1)), (Point(0, 0), Point(1, 0)))

    @given(points, points, points, points)
    def test_symmetry(self, a, b, c, d):
        """Test that the classification does not depend on argument order."""
        if a == b or c == d:
            return
        first = segment_cross((a, b), (c, d))
        second = segment_cross((c, d), (a, b))
        assert first.kind is second.kind
        if first.kind is CrossKind.PROPER:
            assert first.point == second.point


class TestLineIntersection:
    """Test infinite line intersection."""

    def test_parallel_lines(self):
        """Test that parallel lines have no intersection."""
        assert line_intersection(Point(0, 0), Point(1, 1), Point(0, 1), Point(1, 2)) is None

    def test_exact_point(self):
        """Test an intersection with rational coordinates."""
        p = line_intersection(Point(0, 0), Point(3, 1), Point(0, 1), Point(1, 0))
        assert p == Point(Fraction(3, 4), Fraction(1, 4))


class TestPolygons:
    """Test half-plane intersection and interior points."""

    def test_bounded_triangle(self):
        """Test a triangle cut out by three half-planes."""
        hs = [
            HalfPlane(0, 1, 0),  # y > 0
            HalfPlane(1, 0, 0),  # x > 0
            HalfPlane(-1, -1, 4),  # x + y < 4
        ]
        region = polygon_from_halfplanes(hs)
        assert region.kind is RegionKind.POLYGON
        assert set(region.vertices) == {Point(0, 0), Point(4, 0), Point(0, 4)}
        assert polygon_area2(region.vertices) == 16

    def test_unbounded_region_is_clipped(self):
        """Test that an open wedge is reported as unbounded."""
        region = polygon_from_halfplanes([HalfPlane(0, 1, 0), HalfPlane(1, 0, 0)], Fraction(10))
        assert region.kind is RegionKind.UNBOUNDED
        assert Point(10, 10) in region.vertices

    def test_empty_intersection(self):
        """Test contradictory half-planes."""
        region = polygon_from_halfplanes([HalfPlane(1, 0, 0), HalfPlane(-1, 0, -1)])
        assert region.kind is RegionKind.EMPTY

    def test_strict_line_is_empty(self):
        """Test that a strict zero-width strip is empty."""
        region = polygon_from_halfplanes([HalfPlane(1, 0, 0), HalfPlane(-1, 0, 0)])
        assert region.kind is RegionKind.EMPTY

    def test_closed_line_piece_is_segment(self):
        """Test that a closed zero-width region is reported by its two ends."""
        hs = [
            HalfPlane(1, 0, 0, strict=False),
            HalfPlane(-1, 0, 0, strict=False),
            HalfPlane(0, 1, 0, strict=False),
            HalfPlane(0, -1, 3, strict=False),
        ]
        region = polygon_from_halfplanes(hs)
        assert region.kind is RegionKind.SEGMENT
        assert region.vertices == [Point(0, 0), Point(0, 3)]

    def test_closed_corner_is_point(self):
        """Test that closed half-planes meeting in one point give a point region."""
        hs = [
            HalfPlane(1, 0, 0, strict=False),
            HalfPlane(-1, 0, 0, strict=False),
            HalfPlane(0, 1, -2, strict=False),
            HalfPlane(0, -1, 2, strict=False),
        ]
        region = polygon_from_halfplanes(hs)
        assert region.kind is RegionKind.POINT
        assert region.vertices == [Point(0, 2)]

    def test_interior_point_strictly_inside(self):
        """Test that the vertex average lies strictly inside."""
        hs = [HalfPlane(0, 1, 0), HalfPlane(1, 0, 0), HalfPlane(-1, -1, 4)]
        p = interior_point(polygon_from_halfplanes(hs), hs)
        assert all(h.value(p) > 0 for h in hs)

    def test_interior_point_zero_area(self):
        """Test that a segment has no interior point."""
        with pytest.raises(ZeroArea):
            interior_point([Point(0, 0), Point(1, 1), Point(2, 2)])

    def test_side_of_rejects_collinear_witness(self):
        """Test that a witness on the line cannot pick a side."""
        with pytest.raises(ValueError):
            HalfPlane.side_of(Point(0, 0), Point(1, 0), Point(3, 0))


class TestSolveLinear:
    """Test exact Gauss-Jordan elimination."""

    def test_unique_solution(self):
        """Test a small regular system."""
        xs = solve_linear([[2, 1], [1, 3]], [3, 5])
        assert xs == [Fraction(4, 5), Fraction(7, 5)]

    def test_singular(self):
        """Test that a singular matrix is reported."""
        with pytest.raises(ZeroArea):
            solve_linear([[1, 2], [2, 4]], [1, 2])


class TestLpFeasible:
    """Test exact phase-1 simplex."""

    def test_feasible_ordering(self):
        """Test x1 - x0 >= 1 and x2 - x1 >= 1."""
        system = LinSystem(3)
        system.add([-1, 1, 0], 1)
        system.add([0, -1, 1], 1)
        result = lp_feasible(system)
        assert result.feasible
        x = result.assignment
        assert x[1] - x[0] >= 1 and x[2] - x[1] >= 1

    def test_equality_rows(self):
        """Test a system mixing equalities and inequalities with negative values."""
        system = LinSystem(2)
        system.add([1, 1], -3, Relation.EQ)
        system.add([1, -1], 1)
        result = lp_feasible(system)
        assert result.feasible
        x = result.assignment
        assert x[0] + x[1] == -3 and x[0] - x[1] >= 1

    def test_infeasible_witness_is_minimal(self):
        """Test that the witness drops rows not needed for the contradiction."""
        system = LinSystem(2)
        system.add([0, 1], 0)  # unrelated
        system.add([1, 0], 2)
        system.add([-1, 0], -1)  # x <= 1
        result = lp_feasible(system)
        assert not result.feasible
        assert result.witness == [1, 2]

    def test_row_width_checked(self):
        """Test that rows of the wrong width are rejected."""
        with pytest.raises(ValueError):
            LinSystem(2).add([1, 2, 3], 0)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(rationals, min_size=2, max_size=3),
        st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
    )
    def test_soundness_on_known_solution(self, solution, rows):
        """Test that systems built around a known solution are feasible and solved correctly."""
        n = len(solution)
        system = LinSystem(n)
        for coeffs in rows:
            coeffs = coeffs[:n]
            value = sum(Fraction(c) * v for c, v in zip(coeffs, solution))
            system.add(coeffs, value - 1)
        result = lp_feasible(system)
        assert result.feasible
        assert all(row.satisfied_by(result.assignment) for row in system.rows)
