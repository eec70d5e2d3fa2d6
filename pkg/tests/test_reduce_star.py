"""Tests for the single stages of the star reduction."""

import pytest

from aligned_drawing.core.aligned_model import classify_edge, combs, is_separating
from aligned_drawing.core.annotate import annotate_drawing
from aligned_drawing.core.fixtures import kstar3
from aligned_drawing.core.lifting import lift
from aligned_drawing.core.planar import separating_triangles
from aligned_drawing.core.reduce_star import (
    _collapse_triangle,
    add_outer_cycle,
    anchor_floating,
    eliminate,
    ensure_origin,
    gadget_separating_edges,
    kill_closed_combs,
    place_origin_vertex,
    reduce_star,
    reduction_certificates,
    restore_separating_edges,
    triangulate_base,
)
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.core.verifier import verify_aligned
from aligned_drawing.exceptions import OriginUnsupported, PreconditionFailed
from aligned_drawing.models.drawing import Drawing
from aligned_drawing.models.geometry import Point
from aligned_drawing.models.plan import (
    DropOriginGadget,
    DropOuterCycle,
    LiftPlan,
    ReinsertSubgraph,
    RemoveGadget,
    RestoreSeparatingEdge,
)
from aligned_drawing.utils.serialization import instance_from_dict


def wheel():
    """Origin vertex with a spoke on each axis ray and a rim around it."""
    vertices = [{"id": "o", "placement": {"type": "origin"}}]
    edges = []
    for j in range(4):
        vertices.append({"id": f"a{j}", "placement": {"type": "ray", "index": j, "rank": 1}})
        edges.append({"id": f"s{j}", "tail": "o", "head": f"a{j}", "aligned": True})
        edges.append({"id": f"r{j}", "tail": f"a{j}", "head": f"a{(j + 1) % 4}"})
    rotation = {"o": [f"s{j}" for j in range(4)]}
    for j in range(4):
        rotation[f"a{j}"] = [f"r{j}", f"s{j}", f"r{(j - 1) % 4}"]
    return instance_from_dict(
        {
            "arrangement": {"kind": "star", "k": 2},
            "vertices": vertices,
            "edges": edges,
            "rotation": rotation,
            "outer_face": [{"edge": "r0", "tail": "a1"}],
        }
    )


def pendant_edge():
    """One vertex on a ray joined to a free vertex; the origin stays empty."""
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


def floating_edge():
    """A single edge inside cell 0 that touches no ray."""
    return instance_from_dict(
        {
            "arrangement": {"kind": "star", "k": 2},
            "vertices": [
                {"id": "x", "placement": {"type": "cell", "index": 0}},
                {"id": "y", "placement": {"type": "cell", "index": 0}},
            ],
            "edges": [{"id": "xy", "tail": "x", "head": "y"}],
            "rotation": {"x": ["xy"], "y": ["xy"]},
            "outer_face": [{"edge": "xy", "tail": "x"}, {"edge": "xy", "tail": "y"}],
        }
    )


class TestAnchorFloating:
    """Test tying a floating graph to a ray."""

    def test_touching_graph_unchanged(self):
        """Test that a graph on the arrangement is returned as is."""
        ag = kstar3()
        anchored, plan = anchor_floating(ag)
        assert anchored is ag
        assert len(plan) == 0

    def test_floating_edge(self):
        """Test that a new vertex on the cell's right boundary ray joins the graph."""
        anchored, plan = anchor_floating(floating_edge())
        assert len(anchored.vertices) == 3
        (step,) = list(plan)
        assert isinstance(step, RemoveGadget)
        assert step.reason == "anchor"
        (vid,) = step.vertices
        (eid,) = step.edges
        assert anchored.placement[vid].on_track and anchored.placement[vid].index == 0
        assert classify_edge(anchored, eid).anchored == 1


class TestGadgets:
    """Test replacing separating edges by quadrangles and putting them back."""

    def test_every_separating_edge_replaced(self):
        """Test that each separating edge gets one quadrangle of free vertices."""
        ag = kstar3()
        expected = sorted(e for e in ag.edges if is_separating(ag, e))
        gadgeted, plan = gadget_separating_edges(ag)
        steps = plan.of_type(RestoreSeparatingEdge)
        assert sorted(s.edge for s in steps) == expected
        for s in steps:
            assert s.edge not in gadgeted.edges
            assert gadgeted.placement[s.w1].is_free
            assert gadgeted.placement[s.w2].is_free

    def test_crossing_edge_keeps_its_ray(self):
        """Test that the gadget of a crossing edge records the crossed ray."""
        _, plan = gadget_separating_edges(kstar3())
        (step,) = [s for s in plan.of_type(RestoreSeparatingEdge) if s.edge == "a1g"]
        assert step.track == 2
        assert (step.tail, step.head) == ("a1", "g")

    def test_restore(self):
        """Test that restoring puts every original edge back with its crossing."""
        ag = kstar3()
        gadgeted, plan = gadget_separating_edges(ag)
        restored = restore_separating_edges(gadgeted, plan)
        assert set(ag.edges) <= set(restored.edges)
        assert classify_edge(restored, "a1g").crossed == 1

    def test_restore_without_steps(self):
        """Test that an empty plan leaves the instance alone."""
        ag = kstar3()
        _, plan = anchor_floating(ag)
        assert restore_separating_edges(ag, plan) is ag


class TestOrigin:
    """Test origin vertices and their spokes."""

    def test_existing_origin(self):
        """Test that an origin vertex with every spoke needs no gadget."""
        ag = kstar3()
        result, plan = ensure_origin(ag)
        assert set(result.edges) == set(ag.edges)
        (step,) = plan.of_type(DropOriginGadget)
        assert step.vertices == () and step.edges == ()

    def test_empty_origin_rejected(self):
        """Test that ensure_origin keeps its strict precondition."""
        with pytest.raises(OriginUnsupported):
            ensure_origin(pendant_edge())

    def test_vertex_placed_in_empty_face(self):
        """Test that place_origin_vertex adds the origin and one spoke per ray."""
        result, plan = place_origin_vertex(pendant_edge())
        o = result.origin_vertex()
        assert o is not None
        assert result.graph.degree(o) == 4
        assert all(result.crossings[e].aligned for e in result.graph.rotation[o])
        (step,) = plan.of_type(DropOriginGadget)
        assert step.vertices[0] == o
        assert len(step.vertices) == 4 and len(step.edges) == 4


class TestOuterCycle:
    """Test the enclosing cycle."""

    def test_one_vertex_per_ray(self):
        """Test that every ray ends in a cycle vertex."""
        result, plan = add_outer_cycle(kstar3())
        (step,) = list(plan)
        assert isinstance(step, DropOuterCycle)
        assert len(step.vertices) == 6
        for r, c in enumerate(step.vertices):
            assert result.vertices_on(r)[-1] == c

    def test_ties_skip_crossed_ray(self):
        """Test that a ray ending in a crossing gets no tie edge."""
        _, plan = add_outer_cycle(kstar3())
        (step,) = list(plan)
        # five ties plus six cycle edges
        assert len(step.edges) == 11


class TestTriangulateBase:
    """Test triangulation of bounded faces."""

    def test_triangulated_wheel_unchanged(self):
        """Test that a wheel needs no new edges."""
        ag = wheel()
        result, plan = triangulate_base(ag)
        assert set(result.edges) == set(ag.edges)
        assert len(plan) == 0


class TestElimination:
    """Test elimination and closed combs."""

    def test_needs_origin(self):
        """Test that elimination refuses an instance without origin vertex."""
        with pytest.raises(PreconditionFailed):
            eliminate(pendant_edge())

    def test_fixpoint(self):
        """Test that a reduced triangulation has nothing left to eliminate."""
        rt, _ = reduce_star(kstar3())
        again, plan = eliminate(rt.ag)
        assert len(plan) == 0
        assert reduction_certificates(again.ag) == []

    def test_no_closed_combs_left(self):
        """Test that the pipeline output has no occupied closed comb."""
        rt, _ = reduce_star(kstar3())
        same, plan = kill_closed_combs(rt)
        assert len(plan) == 0
        assert same.ag is rt.ag


def nested_triangle():
    """Triangle a, b, c in Q0 around w, with d on the other side of ab."""
    d = Drawing(
        make_star_geometry(2),
        {
            "a": Point(6, 0),
            "b": Point(0, 6),
            "c": Point(6, 6),
            "w": Point(4, 4),
            "d": Point(1, 1),
        },
    )
    edges = {
        "ab": ("a", "b"),
        "ac": ("a", "c"),
        "bc": ("b", "c"),
        "aw": ("a", "w"),
        "bw": ("b", "w"),
        "cw": ("c", "w"),
        "ad": ("a", "d"),
        "bd": ("b", "d"),
    }
    return d, annotate_drawing(d, edges)


class TestCollapse:
    """Test collapsing the interior of a separating triangle."""

    def test_corners_pinned(self):
        """Test that only the interior vertex is contracted."""
        _, ag = nested_triangle()
        assert ("a", "b", "c") in separating_triangles(ag.graph)
        collapsed, sub = _collapse_triangle(ag, ("a", "b", "c"), {"d"})
        assert set(collapsed.vertices) == {"a", "b", "c", "d"}
        assert [step.removed for step in sub] == ["w"]
        assert separating_triangles(collapsed.graph) == []

    def test_replayed_inside_triangle(self):
        """Test that lifting the recorded step puts the interior back."""
        d, ag = nested_triangle()
        _, sub = _collapse_triangle(ag, ("a", "b", "c"), {"d"})
        plan = LiftPlan([ReinsertSubgraph(("a", "b", "c"), plan=sub)])
        lifted = lift(plan, d.without(("w",)))
        assert set(lifted.coords) == set(ag.vertices)
        assert verify_aligned(ag, lifted).passed

    def test_nothing_inside(self):
        """Test that a facial triangle gives an empty plan."""
        _, ag = nested_triangle()
        collapsed, sub = _collapse_triangle(ag, ("a", "c", "w"), {"d"})
        assert len(sub) == 0
        assert collapsed is ag


class TestCombs:
    """Test the combs of a cell."""

    def test_kstar3_cell0(self):
        """Test that the rim edge splits cell 0 into two combs."""
        cs = combs(kstar3(), 0)
        assert [(c.inner, c.outer) for c in cs] == [(None, "r0"), ("r0", None)]
        assert not any(c.closed for c in cs)
        assert sum(c.vertices.count("f") for c in cs) == 1

    def test_empty_cell(self):
        """Test a cell with neither separating edges nor free vertices."""
        cs = combs(wheel(), 1)
        assert [(c.inner, c.outer) for c in cs] == [(None, "r1"), ("r1", None)]
        assert all(c.vertices == [] for c in cs)
