"""Tests for the star reduction and the star drawer."""

from fractions import Fraction

import pytest

from aligned_drawing.core.annotate import annotate_drawing
from aligned_drawing.core.fixtures import counterexample2, fig1a, fig1d, kstar3
from aligned_drawing.core.reduce_star import prepare_star, reduce_star, reduction_certificates
from aligned_drawing.core.star_drawer import (
    check_observations,
    draw_ccw,
    draw_reduced_star,
    make_star_geometry,
    ray_param,
)
from aligned_drawing.core.verifier import verify_aligned
from aligned_drawing.exceptions import ComplexityExceeded, NotCcwAligned
from aligned_drawing.models.aligned import Crossing
from aligned_drawing.models.drawing import Drawing
from aligned_drawing.models.geometry import Point


class TestStarGeometry:
    """Test the rational ray directions."""

    def test_two_lines_are_axes(self):
        """Test that k=2 gives the coordinate axes."""
        geom = make_star_geometry(2)
        assert geom.directions == (Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1))

    def test_three_lines(self):
        """Test the rational direction of ray 1 for k=3."""
        geom = make_star_geometry(3)
        assert geom.direction(1) == Point(Fraction(3, 5), Fraction(4, 5))
        assert geom.direction(4) == Point(Fraction(-3, 5), Fraction(-4, 5))

    def test_rays_sorted_counterclockwise(self):
        """Test that consecutive rays turn left."""
        geom = make_star_geometry(5)
        n = len(geom.directions)
        assert all(geom.direction(j).cross(geom.direction(j + 1)) > 0 for j in range(n))

    def test_one_line_rejected(self):
        """Test that a star needs two pseudolines."""
        with pytest.raises(ValueError):
            make_star_geometry(1)


class TestRayParam:
    """Test segment and ray intersections."""

    def test_crossing_ray(self):
        """Test a vertical segment through the positive x-axis."""
        d = Drawing(make_star_geometry(2))
        assert ray_param(d, 0, Point(1, -1), Point(1, 1)) == 1

    def test_opposite_ray(self):
        """Test that meeting the opposite ray does not count."""
        d = Drawing(make_star_geometry(2))
        assert ray_param(d, 0, Point(-1, -1), Point(-1, 1)) is None

    def test_same_side(self):
        """Test a segment that stays above the axis."""
        d = Drawing(make_star_geometry(2))
        assert ray_param(d, 0, Point(1, 1), Point(2, 3)) is None


class TestPrepareStar:
    """Test the input checks of the star pipeline."""

    def test_parallel_rejected(self):
        """Test that layers are refused."""
        with pytest.raises(ComplexityExceeded):
            prepare_star(fig1a())

    def test_complexity_rejected(self):
        """Test that a 2-crossed free edge is refused."""
        with pytest.raises(ComplexityExceeded):
            prepare_star(fig1d())

    def test_counterexample_rejected(self):
        """Test that the undrawable instance is not ccw-aligned."""
        with pytest.raises(NotCcwAligned):
            prepare_star(counterexample2())


class TestReduceStar:
    """Test reduction to a reduced star triangulation."""

    def test_certificates_hold(self):
        """Test that the reduced instance passes every certificate."""
        rt, _ = reduce_star(kstar3())
        assert reduction_certificates(rt.ag) == []
        assert len(rt.outer_cycle) == rt.ag.arr.n_tracks

    def test_drawing_of_reduced_instance(self):
        """Test that the reduced triangulation draws and verifies."""
        rt, _ = reduce_star(kstar3())
        d = draw_reduced_star(rt, make_star_geometry(3))
        assert check_observations(rt, d) == []
        assert verify_aligned(rt.ag, d).passed


class TestDrawCcw:
    """Test the full star pipeline."""

    def test_wheel(self):
        """Test that the wheel instance gets a verified drawing."""
        ag = kstar3()
        d = draw_ccw(ag)
        assert set(d.coords) == set(ag.vertices)
        assert d.coords["o"] == Point(0, 0)
        assert verify_aligned(ag, d).passed

    def test_custom_geometry(self):
        """Test drawing on a given set of rays."""
        ag = kstar3()
        geom = make_star_geometry(3)
        assert draw_ccw(ag, geom).lines == geom

    def test_hand_drawn_kite(self):
        """Test an instance read off a drawing, with no origin vertex and an anchored crossing."""
        coords = {
            "a0": Point(2, 0),
            "a1": Point(0, 2),
            "a2": Point(-1, 0),
            "a3": Point(0, -2),
            "f": Point(3, 3),
            "g": Point(-3, -1),
        }
        edges = {
            "a0a1": ("a0", "a1"),
            "a1a2": ("a1", "a2"),
            "a2a3": ("a2", "a3"),
            "a3a0": ("a3", "a0"),
            "a0f": ("a0", "f"),
            "fa1": ("f", "a1"),
            "a1g": ("a1", "g"),
            "ga3": ("g", "a3"),
        }
        ag = annotate_drawing(Drawing(make_star_geometry(2), coords), edges)
        assert ag.origin_vertex() is None
        assert ag.crossings["a1g"].crossings == (Crossing(2, 2),)
        d = draw_ccw(ag)
        assert set(d.coords) == set(coords)
        assert verify_aligned(ag, d).passed
