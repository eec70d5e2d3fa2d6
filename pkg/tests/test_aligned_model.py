"""Tests for the aligned-graph model: validation, classification and structure checks."""

import pytest

from aligned_drawing.core.aligned_model import (
    alignment_complexity,
    classify_edge,
    complexity_at_most,
    orient_ccw,
    rebuild,
    restrict,
    restrict_lines,
    structure_check,
)
from aligned_drawing.core.fixtures import (
    BUILTINS,
    builtin,
    counterexample2,
    fig1a,
    fig1d,
    fig4d,
    kstar3,
    pappus,
)
from aligned_drawing.exceptions import (
    ComplexityExceeded,
    InconsistentAnnotation,
    NotCcwAligned,
    UnknownInstance,
)
from aligned_drawing.models.aligned import (
    Arrangement,
    Crossing,
    CrossingSpec,
    EdgeKind,
    Placement,
    format_complexity,
)


class TestArrangement:
    """Test the combinatorial arrangement."""

    def test_star_tracks_and_cells(self):
        """Test ray and cell counts of a 3-line star."""
        arr = Arrangement.star(3)
        assert arr.n_tracks == 6 and arr.n_cells == 6
        assert arr.line_of(4) == 1
        assert arr.left_cell(0) == 0 and arr.right_cell(0) == 5

    def test_parallel_tracks_and_cells(self):
        """Test that m layers bound m+1 cells."""
        arr = Arrangement.parallel(2)
        assert arr.n_tracks == 2 and arr.n_cells == 3
        assert arr.across(1, 1) == 2
        assert arr.across(1, 0) is None

    def test_star_needs_two_lines(self):
        """Test that a star with one line is rejected."""
        with pytest.raises(ValueError):
            Arrangement.star(1)


class TestBuiltins:
    """Test the named instances."""

    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_every_builtin_validates(self, name):
        """Test that every builtin builds and has ranked placements."""
        ag = builtin(name)
        for v, p in ag.placement.items():
            if p.on_track:
                assert ag.track_position(p.index, ("v", v)) == p.rank

    def test_unknown_builtin(self):
        """Test that an unknown name lists the available ones."""
        with pytest.raises(UnknownInstance, match="pappus"):
            builtin("nope")


class TestClassification:
    """Test edge classes and alignment complexity."""

    def test_pappus_complexity(self):
        """Test that the doubled instance has complexity (bot,3,bot)."""
        assert format_complexity(alignment_complexity(pappus())) == "(bot,3,bot)"

    def test_counterexample_complexity(self):
        """Test the 2-line counterexample."""
        assert alignment_complexity(counterexample2()) == (None, 1, None)

    def test_fig1d_complexity(self):
        """Test an instance with a 2-crossed free edge."""
        assert alignment_complexity(fig1d()) == (2, 1, None)

    def test_aligned_edges_are_ignored(self):
        """Test that aligned edges do not count toward complexity."""
        ag = fig1a()
        assert classify_edge(ag, "ab").kind is EdgeKind.ALIGNED
        assert alignment_complexity(ag) == (1, 0, None)

    def test_edge_classes(self):
        """Test anchoredness and crossedness of single edges."""
        ag = pappus()
        cls = classify_edge(ag, "g1")
        assert (cls.anchored, cls.crossed, cls.kind) == (1, 3, EdgeKind.OTHER)
        assert str(cls) == "1-anchored 3-crossed"
        assert classify_edge(fig1a(), "pq").kind is EdgeKind.OTHER
        assert classify_edge(kstar3(), "r0").anchored == 2

    def test_complexity_order(self):
        """Test the componentwise order with bot below everything."""
        assert complexity_at_most((None, 1, None), (1, 1, 0))
        assert not complexity_at_most((2, 1, None), (1, 1, 0))
        assert not complexity_at_most((None, None, 0), (None, None, None))


class TestOrientCcw:
    """Test counterclockwise orientation of star instances."""

    def test_parallel_rejected(self):
        """Test that layers have no counterclockwise direction."""
        with pytest.raises(ComplexityExceeded):
            orient_ccw(fig1a())

    def test_complexity_too_high(self):
        """Test that a 2-crossed free edge is out of range."""
        with pytest.raises(ComplexityExceeded):
            orient_ccw(fig1d())

    def test_free_source_rejected(self):
        """Test that the counterexample needs a free source for a 1-crossed edge."""
        with pytest.raises(NotCcwAligned):
            orient_ccw(counterexample2())

    def test_idempotent(self):
        """Test that orienting twice changes nothing."""
        once = orient_ccw(kstar3())
        twice = orient_ccw(once)
        assert dict(twice.edges) == dict(once.edges)
        assert twice.crossings == once.crossings


class TestStructureCheck:
    """Test alternation and comb occupancy checks."""

    def test_consecutive_crossings(self):
        """Test that two crossings in a row are reported."""
        report = structure_check(counterexample2())
        assert not report.ok
        assert report.kind == "consecutive-crossings"

    def test_consecutive_vertices(self):
        """Test that two vertices in a row on a ray are reported with their track."""
        report = structure_check(fig4d())
        assert report.kind == "consecutive-vertices"
        assert report.witness == (0, "u1", "u2")

    def test_wheel_is_well_structured(self):
        """Test an instance with alternating rays and one vertex per comb."""
        assert structure_check(kstar3()).ok


class TestBuildAlignedErrors:
    """Test the cross-consistency checks of build_aligned."""

    def test_missing_order_entry(self):
        """Test that a track vertex must appear in its order."""
        ag = fig1d()
        with pytest.raises(InconsistentAnnotation, match="missing from the order"):
            rebuild(ag, orders={**ag.orders, 0: ()})

    def test_missing_crossing_annotation(self):
        """Test that every edge needs an annotation."""
        ag = fig1d()
        crossings = {e: s for e, s in ag.crossings.items() if e != "up"}
        with pytest.raises(InconsistentAnnotation, match="no crossing annotation"):
            rebuild(ag, crossings=crossings)

    def test_layer_in_star(self):
        """Test that a layer placement is refused on a star."""
        ag = fig1d()
        placement = {v: p.unranked() for v, p in ag.placement.items()}
        placement["u"] = Placement.on_layer(0)
        with pytest.raises(InconsistentAnnotation):
            rebuild(ag, placement=placement)

    def test_two_origins(self):
        """Test that at most one vertex sits at the origin."""
        ag = kstar3()
        placement = {v: p.unranked() for v, p in ag.placement.items()}
        placement["f"] = Placement.origin()
        with pytest.raises(InconsistentAnnotation):
            rebuild(ag, placement=placement)

    def test_aligned_edge_with_crossing(self):
        """Test that an aligned edge cannot cross a track."""
        ag = fig1a()
        crossings = dict(ag.crossings, ab=CrossingSpec((Crossing(0),), aligned=True))
        with pytest.raises(InconsistentAnnotation):
            rebuild(ag, crossings=crossings)

    def test_rebuild_unchanged(self):
        """Test that rebuilding without changes keeps the orders."""
        ag = pappus()
        assert rebuild(ag).orders == ag.orders


class TestRestrict:
    """Test sub-instances."""

    def test_drop_vertex(self):
        """Test that removing g also drops its crossing from ray 2."""
        ag = restrict(kstar3(), [v for v in kstar3().vertices if v != "g"])
        assert "g" not in ag.vertices
        assert ag.orders[2] == (("v", "a2"),)

    def test_drop_vertex_ahead_of_crossing(self):
        """Test that crossing ranks are recomputed when an earlier item of the track goes."""
        ag = restrict(kstar3(), [v for v in kstar3().vertices if v != "a2"])
        assert ag.orders[2] == (("x", "a1g"),)
        assert ag.crossings["a1g"].crossings == (Crossing(2, 1),)

    def test_restrict_lines_gives_counterexample(self):
        """Test that forgetting the odd pseudolines of pappus gives the 2-line instance."""
        reduced = restrict_lines(pappus(), [0, 2])
        target = counterexample2()
        assert reduced.arr == target.arr
        assert {v: p.unranked() for v, p in reduced.placement.items()} == {
            v: p.unranked() for v, p in target.placement.items()
        }
        assert alignment_complexity(reduced) == (None, 1, None)

    def test_restrict_lines_needs_two(self):
        """Test that one pseudoline is not a star."""
        with pytest.raises(ComplexityExceeded):
            restrict_lines(pappus(), [1])

    def test_restrict_lines_parallel(self):
        """Test that layers cannot be forgotten this way."""
        with pytest.raises(ComplexityExceeded):
            restrict_lines(fig1a(), [0])
