"""Tests for combinatorial embeddings."""

import pytest

from aligned_drawing.core.planar import (
    RotationSystem,
    build_embedding,
    contract,
    cycle_sides,
    reglue,
    separating_triangles,
    split_at_triangle,
    triangles,
    uncontract,
)
from aligned_drawing.exceptions import (
    InconsistentRotation,
    NotContractible,
    NotPlanarRotation,
    NotSeparating,
    SelfLoop,
)

K4_EDGES = {
    "ab": ("a", "b"),
    "bc": ("b", "c"),
    "ca": ("c", "a"),
    "ad": ("a", "d"),
    "bd": ("b", "d"),
    "cd": ("c", "d"),
}
# a=(0,0), b=(4,0), c=(0,4), d=(1,1)
K4_ROTATION = {
    "a": ["ab", "ad", "ca"],
    "b": ["bc", "bd", "ab"],
    "c": ["ca", "cd", "bc"],
    "d": ["cd", "ad", "bd"],
}
OUTER = ("ab", "b")


def k4():
    return build_embedding(["a", "b", "c", "d"], K4_ROTATION, K4_EDGES, OUTER)


def k4_plus():
    """K4 with e=(2,1/2) inside triangle abd, so abd separates e from c."""
    edges = dict(K4_EDGES, ae=("a", "e"), be=("b", "e"), de=("d", "e"))
    rotation = {
        "a": ["ab", "ae", "ad", "ca"],
        "b": ["bc", "bd", "be", "ab"],
        "c": ["ca", "cd", "bc"],
        "d": ["cd", "ad", "de", "bd"],
        "e": ["de", "ae", "be"],
    }
    return build_embedding(["a", "b", "c", "d", "e"], rotation, edges, OUTER)


class TestBuildEmbedding:
    """Test rotation system validation."""

    def test_k4_faces(self):
        """Test face count, dart coverage and the outer face."""
        g = k4()
        assert len(g.faces) == 4
        assert sum(len(f) for f in g.faces) == 2 * len(g.edges)
        assert set(g.outer_face.vertices) == {"a", "b", "c"}

    def test_outer_face_required(self):
        """Test that a graph with edges needs an outer dart by default."""
        with pytest.raises(InconsistentRotation):
            build_embedding(["a", "b", "c", "d"], K4_ROTATION, K4_EDGES, None)

    def test_outer_face_left_open(self):
        """Test that the outer face may be chosen after tracing the faces."""
        g = build_embedding(["a", "b", "c", "d"], K4_ROTATION, K4_EDGES, None, require_outer=False)
        assert g.outer is None
        assert len(g.faces) == 4

    def test_inner_face_is_triangle(self):
        """Test that the face left of a->b is abd."""
        g = k4()
        assert set(g.face_of[("ab", "a")].vertices) == {"a", "b", "d"}

    def test_self_loop(self):
        """Test that a self-loop is rejected."""
        with pytest.raises(SelfLoop):
            build_embedding(["a"], {"a": ["x", "x"]}, {"x": ("a", "a")}, ("x", "a"))

    def test_missing_rotation_entry(self):
        """Test that a rotation must list every incident edge."""
        rotation = dict(K4_ROTATION, d=["cd", "ad"])
        with pytest.raises(InconsistentRotation):
            build_embedding(["a", "b", "c", "d"], rotation, K4_EDGES, OUTER)

    def test_non_planar_rotation(self):
        """Test that a flipped rotation fails the Euler check."""
        rotation = dict(K4_ROTATION, d=["ad", "cd", "bd"])
        with pytest.raises(NotPlanarRotation):
            build_embedding(["a", "b", "c", "d"], rotation, K4_EDGES, OUTER)

    def test_disconnected(self):
        """Test that a disconnected graph is rejected."""
        edges = {"ab": ("a", "b"), "cd": ("c", "d")}
        rotation = {"a": ["ab"], "b": ["ab"], "c": ["cd"], "d": ["cd"]}
        with pytest.raises(NotPlanarRotation):
            build_embedding(["a", "b", "c", "d"], rotation, edges, ("ab", "a"))

    def test_unknown_outer_dart(self):
        """Test that the outer dart must belong to the graph."""
        with pytest.raises(InconsistentRotation):
            build_embedding(["a", "b", "c", "d"], K4_ROTATION, K4_EDGES, ("zz", "a"))


class TestTriangles:
    """Test triangle enumeration and separating triangles."""

    def test_k4_has_no_separating_triangle(self):
        """Test that every triangle of K4 bounds a face."""
        g = k4()
        assert len(triangles(g)) == 4
        assert separating_triangles(g) == []

    def test_separating_triangle_found(self):
        """Test that abd separates e from c."""
        assert separating_triangles(k4_plus()) == [("a", "b", "d")]

    def test_cycle_sides(self):
        """Test the two sides of the separating triangle."""
        left, right = cycle_sides(k4_plus(), ("a", "b", "d"))
        assert left == {"e"}
        assert right == {"c"}

    def test_cycle_sides_needs_cycle(self):
        """Test that a non-cycle is rejected."""
        with pytest.raises(NotSeparating):
            cycle_sides(k4(), ("a", "b", "zz"))


class TestSplitAndReglue:
    """Test splitting at a separating triangle."""

    def test_split_parts(self):
        """Test which side each vertex lands on."""
        inner, outer = split_at_triangle(k4_plus(), ("a", "b", "d"))
        assert set(inner.vertices) == {"a", "b", "d", "e"}
        assert set(outer.vertices) == {"a", "b", "c", "d"}
        assert set(inner.outer_face.vertices) == {"a", "b", "d"}

    def test_reglue_restores_embedding(self):
        """Test that reglue inverts split_at_triangle."""
        g = k4_plus()
        inner, outer = split_at_triangle(g, ("a", "b", "d"))
        assert reglue(inner, outer).equivalent(g)

    def test_facial_triangle_does_not_split(self):
        """Test that a face triangle is not separating."""
        with pytest.raises(NotSeparating):
            split_at_triangle(k4(), ("a", "b", "d"))


class TestContraction:
    """Test edge contraction and its inverse."""

    def test_contract_merges_parallels(self):
        """Test that contracting ad in K4 leaves a triangle."""
        g, record = contract(k4(), "ad", "a")
        assert set(g.vertices) == {"a", "b", "c"}
        assert set(g.edges) == {"ab", "bc", "ca"}
        assert record.removed == "d" and record.survivor == "a"
        assert sorted(record.multi_edge_merges) == [("bd", "ab"), ("cd", "ca")]

    def test_uncontract_restores(self):
        """Test that uncontracting gives back the same embedding."""
        original = k4()
        g, record = contract(original, "ad", "a")
        assert uncontract(g, record).equivalent(original)

    def test_non_empty_two_gon(self):
        """Test that contracting across a separating triangle is refused."""
        with pytest.raises(NotContractible):
            contract(k4_plus(), "ab", "a")

    def test_survivor_must_be_endpoint(self):
        """Test that the survivor has to be an endpoint."""
        with pytest.raises(InconsistentRotation):
            contract(k4(), "ad", "b")


class TestRotationSystem:
    """Test the mutable rotation system."""

    def test_delete_vertex(self):
        """Test that deleting the separated vertex gives back K4."""
        rs = RotationSystem.from_graph(k4_plus())
        rs.delete(vertices=["e"])
        assert rs.freeze().equivalent(k4())

    def test_delete_outer_edge_merges_faces(self):
        """Test that removing an outer edge makes the merged face the outer one."""
        rs = RotationSystem.from_graph(k4())
        rs.delete(edges=["ab"])
        g = rs.freeze()
        assert len(g.faces) == 3
        assert set(g.outer_face.vertices) == {"a", "b", "c", "d"}

    def test_delete_inner_edge_keeps_outer_face(self):
        """Test that the outer face survives the removal of an inner edge."""
        rs = RotationSystem.from_graph(k4())
        rs.delete(edges=["cd"])
        assert set(rs.freeze().outer_face.vertices) == {"a", "b", "c"}

    def test_subdivide_keeps_faces(self):
        """Test that subdividing an edge adds one vertex and one edge."""
        rs = RotationSystem.from_graph(k4())
        rs.subdivide("ab", "m", "am", "mb")
        g = rs.freeze()
        assert len(g.faces) == 4
        assert set(g.neighbors("m")) == {"a", "b"}

    def test_add_vertex_twice(self):
        """Test that duplicate vertices are rejected."""
        rs = RotationSystem.from_graph(k4())
        with pytest.raises(InconsistentRotation):
            rs.add_vertex("a")
