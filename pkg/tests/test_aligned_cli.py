"""Tests for the aligned command-line tool."""

import json
import random
from fractions import Fraction
from unittest.mock import patch

import pytest

from aligned_drawing.core.fixtures import counterexample2
from aligned_drawing.core.search import sample_drawing
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.exceptions import EmptyPlacementRegion
from aligned_drawing.models.drawing import Drawing, ParallelGeometry
from aligned_drawing.models.geometry import Point
from aligned_drawing.scripts.aligned_cli import (
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_PIPELINE,
    build_parser,
    main,
)
from aligned_drawing.utils.serialization import dump_coords


@pytest.fixture
def fig1a_coords(tmp_path):
    """A valid coordinates file for builtin:fig1a."""
    d = Drawing(
        ParallelGeometry((Fraction(0),)),
        {"a": Point(0, 0), "b": Point(2, 0), "p": Point(4, 1), "q": Point(4, -1)},
    )
    return dump_coords(d, tmp_path / "fig1a.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


class TestParser:
    """Test argument parsing."""

    def test_defaults(self):
        """Test that the report format defaults to JSON."""
        args = build_parser().parse_args(["classify", "builtin:pappus"])
        assert args.format == "json"
        assert args.trials is None and args.seed is None

    def test_unknown_command(self):
        """Test that argparse rejects unknown commands."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["paint", "builtin:pappus"])


class TestClassify:
    """Test the classify command."""

    def test_pappus(self, capsys):
        """Test the complexity of the doubled counterexample."""
        code, report = run_json(capsys, "classify", "builtin:pappus")
        assert code == EXIT_OK
        assert report["complexity"] == "(bot,3,bot)"
        assert report["ccw_aligned"] is False
        assert report["schema"] == "v1"

    def test_not_ccw_aligned(self, capsys):
        """Test that the counterexample reports why it is not ccw-aligned."""
        _, report = run_json(capsys, "classify", "builtin:counterexample2")
        assert report["complexity"] == "(bot,1,bot)"
        assert report["reason"]["type"] == "NotCcwAligned"

    def test_text_format(self, capsys):
        """Test the human-readable report."""
        code, out = run(capsys, "classify", "builtin:fig1a", "--format", "text")
        assert code == EXIT_OK
        assert "complexity: (1,0,bot)" in out
        assert "ab: aligned" in out


class TestInputErrors:
    """Test exit code 2."""

    def test_missing_file(self, capsys, tmp_path):
        """Test that a missing instance file is an input error."""
        code, _ = run(capsys, "classify", str(tmp_path / "absent.json"))
        assert code == EXIT_INPUT

    def test_unknown_builtin(self, capsys):
        """Test that an unknown builtin prints an error envelope."""
        code, report = run_json(capsys, "classify", "builtin:nothing")
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "UnknownInstance"

    def test_invalid_instance(self, capsys, tmp_path):
        """Test that an inconsistent document is an input error."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"arrangement": {"kind": "star", "k": 2}}))
        code, report = run_json(capsys, "classify", str(path))
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "InconsistentAnnotation"

    def test_bad_config(self, capsys, tmp_path):
        """Test that out-of-range settings are an input error."""
        custom = tmp_path / "custom.yaml"
        custom.write_text("search:\n  trials: 0\n")
        code, _ = run(capsys, "classify", "builtin:pappus", "--config", str(custom))
        assert code == EXIT_INPUT

    def test_zero_trials(self, capsys):
        """Test that --trials 0 is refused."""
        code, _ = run(capsys, "search", "builtin:counterexample2", "--trials", "0")
        assert code == EXIT_INPUT


class TestVerify:
    """Test the verify command."""

    def test_pass(self, capsys, fig1a_coords):
        """Test a valid coordinates file."""
        code, report = run_json(capsys, "verify", "builtin:fig1a", "--coords", str(fig1a_coords))
        assert code == EXIT_OK
        assert report["pass"] is True

    def test_fail(self, capsys, tmp_path):
        """Test that a wrong drawing exits with 1 and names the failed property."""
        d = Drawing(
            ParallelGeometry((Fraction(0),)),
            {"a": Point(0, 0), "b": Point(2, 0), "p": Point(-2, 1), "q": Point(-2, -1)},
        )
        path = dump_coords(d, tmp_path / "wrong.json")
        code, report = run_json(capsys, "verify", "builtin:fig1a", "--coords", str(path))
        assert code == EXIT_FAIL
        assert report["pass"] is False
        assert any(c["prop"] == "orders" and not c["ok"] for c in report["checks"])

    def test_needs_coords(self, capsys):
        """Test that verify without --coords is an input error."""
        code, _ = run(capsys, "verify", "builtin:fig1a")
        assert code == EXIT_INPUT


class TestDraw:
    """Test the draw command."""

    def test_not_ccw_aligned_is_pipeline_error(self, capsys):
        """Test that the counterexample fails inside the pipeline."""
        code, report = run_json(capsys, "draw", "builtin:counterexample2")
        assert code == EXIT_PIPELINE
        assert report["error"]["type"] == "NotCcwAligned"

    def test_drawing_error(self, capsys, mocker):
        """Test that a drawing failure exits with 3."""
        error = EmptyPlacementRegion("No room for v", witness="v")
        mocker.patch("aligned_drawing.scripts.aligned_cli.draw_ccw", side_effect=error)
        code, report = run_json(capsys, "draw", "builtin:kstar3")
        assert code == EXIT_PIPELINE
        assert report["error"]["witness"] == "v"

    def test_outputs_written(self, capsys, tmp_path):
        """Test that coordinates and SVG are written where asked."""
        ag = counterexample2()
        d = sample_drawing(ag, make_star_geometry(2), random.Random(0), 16)
        coords, svg = tmp_path / "c.json", tmp_path / "d.svg"
        with patch("aligned_drawing.scripts.aligned_cli.draw_ccw", return_value=d) as mock_draw:
            code, report = run_json(
                capsys,
                "draw",
                "builtin:counterexample2",
                "--coords",
                str(coords),
                "--out",
                str(svg),
            )
        assert code == EXIT_OK
        mock_draw.assert_called_once()
        assert coords.exists() and svg.exists()
        assert report["vertices"] == len(ag.vertices)


class TestReduce:
    """Test the reduce command."""

    def test_parallel(self, capsys, tmp_path):
        """Test that the reduced instance is written and the plan listed."""
        out = tmp_path / "reduced.json"
        code, report = run_json(capsys, "reduce", "builtin:fig1a", "--out", str(out))
        assert code == EXIT_OK
        assert out.exists()
        assert report["plan"] and all("step" in s for s in report["plan"])

    def test_star_out_of_range(self, capsys):
        """Test that a star instance of too high complexity is a pipeline error."""
        code, _ = run(capsys, "reduce", "builtin:pappus")
        assert code == EXIT_PIPELINE


class TestSearchAndTrace:
    """Test the search and trace commands."""

    def test_search_not_found(self, capsys):
        """Test that a failed search exits with 1 and carries a trace."""
        code, report = run_json(
            capsys, "search", "builtin:counterexample2", "--trials", "3", "--seed", "4"
        )
        assert code == EXIT_FAIL
        assert report["found"] is False
        assert report["seed"] == 4
        assert sum(report["histogram"].values()) == 3
        assert report["trace"]["implications_hold"] is True

    def test_trace(self, capsys, tmp_path):
        """Test the trace of a sampled drawing."""
        ag = counterexample2()
        d = sample_drawing(ag, make_star_geometry(2), random.Random(2), 16)
        path = dump_coords(d, tmp_path / "s.json")
        code, report = run_json(capsys, "trace", "builtin:counterexample2", "--coords", str(path))
        assert code == EXIT_OK
        assert report["premises_hold"] is False

    def test_render(self, capsys, tmp_path, fig1a_coords):
        """Test rendering a coordinates file."""
        svg = tmp_path / "r.svg"
        code, report = run_json(
            capsys, "render", "builtin:fig1a", "--coords", str(fig1a_coords), "--out", str(svg)
        )
        assert code == EXIT_OK
        assert report["svg"] == str(svg)
        assert svg.read_text().count("<text") == 4
