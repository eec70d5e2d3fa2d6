"""Tests for the impossibility trace of the 2-line counterexample."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aligned_drawing.core.counterexample import axis_ray, basis_coords, counterexample_trace
from aligned_drawing.core.fixtures import counterexample2
from aligned_drawing.core.search import sample_drawing
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.exceptions import WrongInstance
from aligned_drawing.models.drawing import Drawing, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import Point

SKEWED = StarGeometry((Point(2, 1), Point(-1, 3), Point(-2, -1), Point(1, -3)))


class TestBasis:
    """Test coordinates in the basis of the two ray directions."""

    def test_axes(self):
        """Test that perpendicular axes give plain coordinates."""
        assert basis_coords(make_star_geometry(2), Point(3, -5)) == (3, -5)

    def test_skewed(self):
        """Test a point written in a skewed basis."""
        p = Point(2, 1).scale(Fraction(1, 3)) + Point(-1, 3).scale(2)
        assert basis_coords(SKEWED, p) == (Fraction(1, 3), 2)

    def test_axis_rays(self):
        """Test which ray carries each u_i."""
        assert [axis_ray(i) for i in (1, 2, 3, 4)] == [1, 0, 3, 2]


class TestTrace:
    """Test the inequality chain on sampled drawings."""

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6), st.sampled_from([None, SKEWED]))
    def test_implications_hold(self, seed, geom):
        """Test that every inequality whose premise holds is satisfied."""
        ag = counterexample2()
        d = sample_drawing(ag, geom or make_star_geometry(2), random.Random(seed), 64)
        trace = counterexample_trace(d)
        assert trace.implications_hold
        assert not trace.premises_hold
        assert not trace.contradiction

    @pytest.mark.slow
    def test_ten_thousand_samples(self):
        """Test the inequality chain on 10^4 seeded drawings on both ray sets."""
        ag = counterexample2()
        for seed in range(10**4):
            geom = SKEWED if seed % 2 else make_star_geometry(2)
            trace = counterexample_trace(sample_drawing(ag, geom, random.Random(seed), 64))
            assert trace.implications_hold, f"seed {seed}"
            assert not trace.premises_hold, f"seed {seed}"

    def test_lambdas_are_ray_distances(self):
        """Test that lambda_i is the distance of u_i along its ray."""
        ag = counterexample2()
        d = sample_drawing(ag, make_star_geometry(2), random.Random(3), 64)
        trace = counterexample_trace(d)
        u1 = d.coords["u1"]
        assert trace.lambdas[0] == u1.y

    def test_to_dict(self):
        """Test the JSON form of a trace."""
        ag = counterexample2()
        d = sample_drawing(ag, make_star_geometry(2), random.Random(1), 64)
        doc = counterexample_trace(d).to_dict()
        assert len(doc["crossing"]) == 4 and len(doc["estimate"]) == 4
        assert doc["implications_hold"] is True

    def test_parallel_drawing_rejected(self):
        """Test that the trace needs a two-line star."""
        d = Drawing(ParallelGeometry((0,)), {"u1": Point(0, 0)})
        with pytest.raises(WrongInstance):
            counterexample_trace(d)

    def test_missing_vertices(self):
        """Test that every vertex of the counterexample needs a point."""
        with pytest.raises(WrongInstance):
            counterexample_trace(Drawing(make_star_geometry(2), {"u1": Point(0, 1)}))
