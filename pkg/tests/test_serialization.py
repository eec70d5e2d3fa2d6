"""Tests for the JSON formats of instances, coordinates and reports."""

import json
import time
from fractions import Fraction

import pytest

from aligned_drawing.core.fixtures import fig1a, fig1d, kstar3, pappus
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.exceptions import InconsistentAnnotation, UnknownInstance
from aligned_drawing.models.drawing import Drawing, ParallelGeometry
from aligned_drawing.models.geometry import Point
from aligned_drawing.utils.serialization import (
    SCHEMA,
    coords_from_dict,
    coords_to_dict,
    dump_coords,
    dump_instance,
    error_detail,
    format_rat,
    instance_from_dict,
    instance_hash,
    instance_to_dict,
    load_coords,
    load_instance,
    make_report,
    parse_rat,
)


class TestRationals:
    """Test exact rational strings."""

    def test_parse(self):
        """Test integers and fractions."""
        assert parse_rat("3") == 3
        assert parse_rat("-6/4") == Fraction(-3, 2)

    def test_format(self):
        """Test that integers keep a denominator."""
        assert format_rat(Fraction(5)) == "5/1"
        assert format_rat(Fraction(-1, 3)) == "-1/3"

    @pytest.mark.parametrize("text", ["0.5", "1e3", "", "1/0", "a/b"])
    def test_rejected_strings(self, text):
        """Test that inexact or malformed strings are refused."""
        with pytest.raises(InconsistentAnnotation):
            parse_rat(text)

    def test_rejects_json_numbers(self):
        """Test that bare JSON numbers are refused."""
        with pytest.raises(InconsistentAnnotation):
            parse_rat(0.5)


class TestInstances:
    """Test instance documents."""

    @pytest.mark.parametrize("build", [fig1a, fig1d, kstar3, pappus])
    def test_document_rebuilds_same_instance(self, build):
        """Test that a written document validates to the same instance."""
        ag = build()
        again = instance_from_dict(instance_to_dict(ag))
        assert again.orders == ag.orders
        assert again.placement == ag.placement
        assert instance_hash(again) == instance_hash(ag)

    def test_crossing_key_follows_arrangement(self):
        """Test that layer crossings use "layer" and ray crossings use "ray"."""
        doc = instance_to_dict(fig1a())
        pq = next(e for e in doc["edges"] if e["id"] == "pq")
        assert pq["crossings"] == [{"layer": 0, "rank": 3}]
        doc = instance_to_dict(fig1d())
        ur = next(e for e in doc["edges"] if e["id"] == "ur")
        assert set(ur["crossings"][0]) == {"ray", "rank"}

    def test_unknown_field(self):
        """Test that unknown top-level fields are refused."""
        doc = instance_to_dict(fig1a())
        doc["colour"] = "red"
        with pytest.raises(InconsistentAnnotation, match="unknown fields"):
            instance_from_dict(doc)

    def test_missing_field(self):
        """Test that a missing section is refused."""
        doc = instance_to_dict(fig1a())
        del doc["rotation"]
        with pytest.raises(InconsistentAnnotation, match="missing"):
            instance_from_dict(doc)

    def test_ranks_must_be_contiguous(self):
        """Test that ranks on a track must run 1..n."""
        doc = instance_to_dict(fig1a())
        doc["vertices"][0]["placement"]["rank"] = 7
        with pytest.raises(InconsistentAnnotation, match="Ranks"):
            instance_from_dict(doc)

    def test_duplicate_vertex(self):
        """Test that a vertex id may appear once."""
        doc = instance_to_dict(fig1a())
        doc["vertices"].append(doc["vertices"][0])
        with pytest.raises(InconsistentAnnotation, match="twice"):
            instance_from_dict(doc)

    def test_bad_arrangement(self):
        """Test that the arrangement kind is checked."""
        doc = instance_to_dict(fig1a())
        doc["arrangement"] = {"kind": "circle", "m": 1}
        with pytest.raises(InconsistentAnnotation):
            instance_from_dict(doc)

    def test_outer_darts_on_one_face(self):
        """Test that the outer darts must bound a single face."""
        doc = instance_to_dict(fig1a())
        doc["outer_face"].append({"edge": "ab", "tail": "a"})
        with pytest.raises(InconsistentAnnotation, match="outer_face"):
            instance_from_dict(doc)

    def test_hash_is_stable(self):
        """Test that the hash does not depend on the build."""
        assert instance_hash(pappus()) == instance_hash(pappus())
        assert instance_hash(pappus()) != instance_hash(fig1a())


class TestLoading:
    """Test loading instances from files and names."""

    def test_builtin(self):
        """Test the builtin: prefix."""
        assert load_instance("builtin:kstar3").arr.size == 3

    def test_unknown_builtin(self):
        """Test that an unknown builtin raises."""
        with pytest.raises(UnknownInstance):
            load_instance("builtin:nothing")

    def test_file(self, tmp_path):
        """Test writing and reading an instance file."""
        path = dump_instance(fig1d(), tmp_path / "sub" / "fig1d.json")
        assert load_instance(path).orders == fig1d().orders
        assert json.loads(path.read_text())["schema"] == SCHEMA

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_instance(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        """Test that broken JSON is an annotation error."""
        path = tmp_path / "broken.json"
        path.write_text("{")
        with pytest.raises(InconsistentAnnotation, match="Invalid JSON"):
            load_instance(path)


class TestCoordinates:
    """Test coordinate files."""

    def test_star_file(self, tmp_path):
        """Test that star directions are stored once per pseudoline."""
        geom = make_star_geometry(3)
        d = Drawing(geom, {"a": Point(Fraction(1, 3), 2), "o": Point(0, 0)})
        doc = coords_to_dict(d)
        assert len(doc["geometry"]["directions"]) == 3
        assert doc["coords"]["a"] == ["1/3", "2/1"]
        back = load_coords(dump_coords(d, tmp_path / "c.json"))
        assert back.lines == geom
        assert back.coords == d.coords

    def test_parallel_file(self):
        """Test layer heights in a coordinate document."""
        d = Drawing(ParallelGeometry((0, Fraction(1, 2))), {"a": Point(1, 0)})
        assert coords_from_dict(coords_to_dict(d)).lines.ys == (0, Fraction(1, 2))

    def test_wrong_schema(self):
        """Test that another schema version is refused."""
        doc = coords_to_dict(Drawing(ParallelGeometry((0,)), {"a": Point(1, 0)}))
        doc["schema"] = "v0"
        with pytest.raises(InconsistentAnnotation, match="schema"):
            coords_from_dict(doc)

    def test_float_coordinate(self):
        """Test that float coordinates are refused."""
        doc = coords_to_dict(Drawing(ParallelGeometry((0,)), {"a": Point(1, 0)}))
        doc["coords"]["a"] = [1.0, 0.0]
        with pytest.raises(InconsistentAnnotation):
            coords_from_dict(doc)


class TestReports:
    """Test report envelopes."""

    def test_envelope(self):
        """Test the common report fields."""
        report = make_report("classify", fig1a(), time.perf_counter(), seed=3, extra=1)
        assert report["schema"] == SCHEMA
        assert report["command"] == "classify"
        assert report["seed"] == 3 and report["extra"] == 1
        assert report["timing"]["seconds"] >= 0
        assert len(report["instance_hash"]) == 64

    def test_error_detail(self):
        """Test that witnesses become plain JSON values."""
        error = InconsistentAnnotation("bad", witness=("e", Fraction(1, 2)))
        detail = error_detail(error)
        assert detail == {
            "type": "InconsistentAnnotation",
            "message": "bad",
            "witness": ["e", "1/2"],
        }
        json.dumps(detail)
