"""Tests for concrete line arrangements."""

from fractions import Fraction

import pytest

from aligned_drawing.core.arrangement import (
    layer_gap_point,
    locate,
    same_line,
    sort_ccw,
    track_hits,
    wedge_combination,
)
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.exceptions import InconsistentAnnotation
from aligned_drawing.models.aligned import Arrangement, Placement
from aligned_drawing.models.drawing import ParallelGeometry
from aligned_drawing.models.geometry import ORIGIN, Point

AXES = make_star_geometry(2)
LAYERS = ParallelGeometry((Fraction(0), Fraction(2)))


class TestLocate:
    """Test point placement."""

    def test_star(self):
        """Test origin, rays and wedges on the axes."""
        assert locate(AXES, ORIGIN) == Placement.origin()
        assert locate(AXES, Point(0, 3)) == Placement.on_ray(1)
        assert locate(AXES, Point(-1, -1)) == Placement.in_cell(2)
        assert locate(AXES, Point(1, -1)) == Placement.in_cell(3)

    def test_layers(self):
        """Test layers and the cells between them."""
        assert locate(LAYERS, Point(5, 2)) == Placement.on_layer(1)
        assert locate(LAYERS, Point(5, 1)) == Placement.in_cell(1)
        assert locate(LAYERS, Point(5, -1)) == Placement.in_cell(0)
        assert locate(LAYERS, Point(5, 3)) == Placement.in_cell(2)


class TestTrackHits:
    """Test crossings of segments with tracks."""

    def test_ordered_from_tail(self):
        """Test that hits come in order along the segment."""
        hits = track_hits(AXES, Point(2, -1), Point(-1, 2))
        assert [h.track for h in hits] == [0, 1]

    def test_layers_downward(self):
        """Test a segment crossing both layers from the top."""
        hits = track_hits(LAYERS, Point(0, 3), Point(3, -1))
        assert [h.track for h in hits] == [1, 0]
        assert hits[0].point == Point(Fraction(3, 4), 2)

    def test_endpoint_on_track_is_not_a_hit(self):
        """Test that touching a layer with an endpoint is not a crossing."""
        assert track_hits(LAYERS, Point(0, 0), Point(1, 1)) == []

    def test_through_origin(self):
        """Test that passing the star centre is refused."""
        with pytest.raises(InconsistentAnnotation):
            track_hits(AXES, Point(-1, -1), Point(1, 1))


class TestHelpers:
    """Test direction sorting and sampling helpers."""

    def test_sort_ccw(self):
        """Test sorting from the positive x-axis."""
        vectors = {"s": Point(0, -1), "e": Point(1, 0), "n": Point(0, 1), "w": Point(-1, 0)}
        assert sort_ccw(vectors) == ["e", "n", "w", "s"]

    def test_same_line(self):
        """Test opposite rays and the origin."""
        arr = Arrangement.star(2)
        assert same_line(AXES, arr, Placement.on_ray(0), Placement.on_ray(2))
        assert same_line(AXES, arr, Placement.origin(), Placement.on_ray(3))
        assert not same_line(AXES, arr, Placement.on_ray(0), Placement.on_ray(1))

    def test_wedge_combination(self):
        """Test that positive weights land in the cell."""
        p = wedge_combination(AXES, 1, Fraction(2), Fraction(3))
        assert locate(AXES, p) == Placement.in_cell(1)

    def test_layer_gap_point(self):
        """Test points inside bounded and unbounded layer cells."""
        assert layer_gap_point(LAYERS, 1, Fraction(4), Fraction(1, 2)) == Point(4, 1)
        assert layer_gap_point(LAYERS, 2, Fraction(0), Fraction(1, 2)).y == Fraction(5, 2)
