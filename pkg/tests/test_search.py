"""Tests for the randomized drawing search."""

import random

import pytest

from aligned_drawing.core.fixtures import counterexample2, fig1a, kstar3, pappus
from aligned_drawing.core.search import default_geometry, random_search, sample_drawing
from aligned_drawing.core.verifier import verify_aligned
from aligned_drawing.models.drawing import ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import ORIGIN
from aligned_drawing.utils.serialization import instance_from_dict


def pendant_edge():
    """One vertex on a ray and one free vertex in the cell after it."""
    return instance_from_dict(
        {
            "arrangement": {"kind": "star", "k": 2},
            "vertices": [
                {"id": "u", "placement": {"type": "ray", "index": 0, "rank": 1}},
                {"id": "p", "placement": {"type": "cell", "index": 0}},
            ],
            "edges": [{"id": "up", "tail": "u", "head": "p"}],
            "rotation": {"u": ["up"], "p": ["up"]},
            "outer_face": [{"edge": "up", "tail": "u"}, {"edge": "up", "tail": "p"}],
        }
    )


class TestSampleDrawing:
    """Test random drawings that respect placements."""

    def test_placements_respected(self):
        """Test that sampled vertices land where the instance puts them."""
        ag = kstar3()
        d = sample_drawing(ag, default_geometry(ag), random.Random(0), 32)
        report = verify_aligned(ag, d)
        assert "placement" not in {c.prop for c in report.failures}
        assert d.coords["o"] == ORIGIN

    def test_same_seed_same_drawing(self):
        """Test that a generator seed fixes the sample."""
        ag = counterexample2()
        first = sample_drawing(ag, default_geometry(ag), random.Random("7:3"), 64)
        second = sample_drawing(ag, default_geometry(ag), random.Random("7:3"), 64)
        assert first.coords == second.coords

    def test_default_geometry(self):
        """Test the geometry chosen for each arrangement kind."""
        assert isinstance(default_geometry(kstar3()), StarGeometry)
        assert default_geometry(fig1a()) == ParallelGeometry((0,))


class TestRandomSearch:
    """Test the sampling loop."""

    def test_counterexample_never_found(self):
        """Test that no sample draws the undrawable instance."""
        result = random_search(counterexample2(), trials=20, seed=5)
        assert not result.found
        assert result.trials == 20
        assert sum(result.histogram.values()) == 20
        assert result.best_failed_checks >= 1

    @pytest.mark.slow
    def test_counterexample_never_found_in_a_million(self):
        """Test the full-size search on the undrawable instance."""
        result = random_search(counterexample2(), trials=10**6, seed=7)
        assert not result.found
        assert result.trials == 10**6

    @pytest.mark.slow
    def test_pappus_never_found(self):
        """Test 10^5 samples of the doubled instance."""
        result = random_search(pappus(), trials=10**5, seed=7)
        assert not result.found

    def test_deterministic(self):
        """Test that a seed fixes the histogram."""
        first = random_search(counterexample2(), trials=10, seed=11)
        second = random_search(counterexample2(), trials=10, seed=11)
        assert first.histogram == second.histogram
        assert first.best_failed_checks == second.best_failed_checks

    def test_trivial_instance_found_at_once(self):
        """Test that a single edge inside its cell is found on the first trial."""
        ag = pendant_edge()
        result = random_search(ag, trials=5)
        assert result.found and result.trials == 1
        assert verify_aligned(ag, result.drawing).passed

    def test_trials_must_be_positive(self):
        """Test that zero trials is an input error."""
        with pytest.raises(ValueError):
            random_search(counterexample2(), trials=0)
