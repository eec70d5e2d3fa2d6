#!/usr/bin/env python3
"""
Command-line front end for aligned drawings.

Loads an instance (a JSON file or builtin:<name>), runs one pipeline and prints a JSON
or text report. Exit codes: 0 ok, 1 verification failed or nothing found, 2 bad input,
3 the reduction or drawing pipeline failed.
"""

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from aligned_drawing.core.aligned_model import (
    alignment_complexity,
    classify_edge,
    orient_ccw,
    structure_check,
)
from aligned_drawing.core.counterexample import counterexample_trace
from aligned_drawing.core.parallel_drawer import draw_parallel_with_guides
from aligned_drawing.core.reduce_parallel import reduce_parallel
from aligned_drawing.core.reduce_star import reduce_star
from aligned_drawing.core.search import default_geometry, random_search, sample_drawing
from aligned_drawing.core.star_drawer import draw_ccw
from aligned_drawing.core.verifier import verify_aligned
from aligned_drawing.exceptions import (
    AlignedError,
    AnnotationError,
    EmbeddingError,
    GeometryError,
    WrongInstance,
)
from aligned_drawing.models.aligned import AlignedGraph, format_complexity
from aligned_drawing.models.config import ToolConfig
from aligned_drawing.utils.logger import Colors, logger, print_header, print_status
from aligned_drawing.utils.serialization import (
    SCHEMA,
    dump_coords,
    dump_instance,
    error_detail,
    load_coords,
    load_instance,
    make_report,
    plan_to_list,
)
from aligned_drawing.utils.svg_renderer import render_svg
from aligned_drawing.utils.workflow_utils import load_config_file

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_PIPELINE = 3


class CommandError(Exception):
    """A failure with its exit code and report detail."""

    def __init__(self, code: int, error: Exception):
        super().__init__(str(error))
        self.code = code
        self.error = error


def _load_config(custom: Optional[str]) -> ToolConfig:
    try:
        return load_config_file(custom_config_path=Path(custom) if custom else None)
    except FileNotFoundError as e:
        logger.debug(f"{e}; using built-in defaults")
        return ToolConfig()


def _load(source: str) -> AlignedGraph:
    try:
        return load_instance(source)
    except (AlignedError, FileNotFoundError, ValueError) as e:
        raise CommandError(EXIT_INPUT, e) from e


def _pipeline(run, *args):
    """Run a pipeline step; every library error it raises is a pipeline failure."""
    try:
        return run(*args)
    except AlignedError as e:
        raise CommandError(EXIT_PIPELINE, e) from e


def _emit(report: Dict[str, Any], fmt: str, lines: List[str]) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
        return
    print_header(f"aligned {report['command']}")
    for line in lines:
        print(line)


# -- commands -----------------------------------------------------------------


def cmd_classify(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    complexity = format_complexity(alignment_complexity(ag))
    edges = {e: str(classify_edge(ag, e)) for e in sorted(ag.edges)}
    if ag.arr.is_star:
        try:
            orient_ccw(ag)
            ccw: Dict[str, Any] = {"ccw_aligned": True}
        except AnnotationError as e:
            ccw = {"ccw_aligned": False, "reason": error_detail(e)}
    else:
        ccw = {"ccw_aligned": None}
    report = make_report(
        "classify",
        ag,
        started,
        arrangement=str(ag.arr),
        complexity=complexity,
        edges=edges,
        **ccw,
    )
    lines = [f"arrangement: {ag.arr}", f"complexity: {complexity}"]
    lines += [f"  {e}: {c}" for e, c in edges.items()]
    if ccw["ccw_aligned"] is not None:
        verdict = "yes" if ccw["ccw_aligned"] else f"no ({ccw['reason']['message']})"
        lines.append(f"ccw-aligned: {verdict}")
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_draw(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    guides: list = []
    if ag.arr.is_star:
        drawing = _pipeline(draw_ccw, ag, None, config.max_halvings)
    else:
        drawing, guides = _pipeline(
            draw_parallel_with_guides, ag, config.parallel_gap, config.max_halvings
        )
    outputs = {}
    if args.coords:
        outputs["coords"] = str(dump_coords(drawing, Path(args.coords)))
    if args.out:
        outputs["svg"] = str(render_svg(ag, drawing, Path(args.out), config, guides))
    report = make_report(
        "draw", ag, started, vertices=len(drawing.coords), inserted_layers=len(guides), **outputs
    )
    lines = [f"drew {len(drawing.coords)} vertices on {ag.arr}"]
    lines += [f"  {kind}: {path}" for kind, path in outputs.items()]
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    if not args.coords:
        raise CommandError(EXIT_INPUT, ValueError("verify needs --coords"))
    try:
        drawing = load_coords(Path(args.coords))
    except (AlignedError, FileNotFoundError, ValueError) as e:
        raise CommandError(EXIT_INPUT, e) from e
    verdict = verify_aligned(ag, drawing)
    report = make_report("verify", ag, started, **verdict.to_dict())
    lines = []
    for c in verdict.checks:
        lines.append(f"  {c.prop}: {'ok' if c.ok else 'FAILED'}")
        if not c.ok:
            lines.append(f"    witness={c.witness} expected={c.expected} observed={c.observed}")
    _emit(report, args.format, lines)
    if args.format == "text":
        print_status(verdict.passed, "aligned drawing" if verdict.passed else "not aligned")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_reduce(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    if ag.arr.is_star:
        rt, plan = _pipeline(reduce_star, ag)
        reduced = rt.ag
    else:
        reduced, plan = _pipeline(reduce_parallel, ag)
    structure = structure_check(reduced)
    outputs = {}
    if args.out:
        outputs["reduced"] = str(dump_instance(reduced, Path(args.out)))
    report = make_report(
        "reduce",
        ag,
        started,
        vertices=len(reduced.vertices),
        structure={"ok": structure.ok, "kind": structure.kind},
        plan=plan_to_list(plan),
        **outputs,
    )
    lines = [
        f"reduced to {len(reduced.vertices)} vertices, {len(plan)} lift steps",
        f"structure check: {'ok' if structure.ok else structure.kind}",
    ]
    lines += [f"  {kind}: {path}" for kind, path in outputs.items()]
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_search(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    trials = config.search_trials if args.trials is None else args.trials
    seed = config.search_seed if args.seed is None else args.seed
    try:
        result = random_search(ag, trials, seed, config.search_box_exponent)
    except ValueError as e:
        raise CommandError(EXIT_INPUT, e) from e

    payload: Dict[str, Any] = {
        "found": result.found,
        "trials": result.trials,
        "best_failed_checks": result.best_failed_checks,
        "histogram": result.histogram,
    }
    if result.found and args.coords:
        path = dump_coords(result.drawing, Path(args.coords))  # type: ignore[arg-type]
        payload["coords"] = str(path)
    if not result.found:
        geom = default_geometry(ag)
        bound = 1 << config.search_box_exponent
        sample = sample_drawing(ag, geom, random.Random(f"{seed}:0"), bound)
        try:
            payload["trace"] = counterexample_trace(sample).to_dict()
        except WrongInstance:
            pass
    report = make_report("search", ag, started, seed=seed, **payload)
    summary = "found an aligned drawing" if result.found else "no aligned drawing found"
    lines = [f"{summary} after {result.trials} trials"]
    lines += [f"  first failing {prop}: {n}" for prop, n in sorted(result.histogram.items())]
    _emit(report, args.format, lines)
    return EXIT_OK if result.found else EXIT_FAIL


def cmd_trace(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    if not args.coords:
        raise CommandError(EXIT_INPUT, ValueError("trace needs --coords"))
    try:
        trace = counterexample_trace(load_coords(Path(args.coords)))
    except (AlignedError, FileNotFoundError, ValueError) as e:
        raise CommandError(EXIT_INPUT, e) from e
    report = make_report("trace", ag, started, **trace.to_dict())
    lines = [
        f"premises hold: {trace.premises_hold}",
        f"implications hold: {trace.implications_hold}",
        f"|x1 y2 x3 y4| = {trace.left_product}",
        f"|y1 x2 y3 x4| = {trace.middle_product}",
    ]
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_render(args: argparse.Namespace, config: ToolConfig) -> int:
    started = time.perf_counter()
    ag = _load(args.instance)
    if not args.coords or not args.out:
        raise CommandError(EXIT_INPUT, ValueError("render needs --coords and --out"))
    try:
        drawing = load_coords(Path(args.coords))
    except (AlignedError, FileNotFoundError, ValueError) as e:
        raise CommandError(EXIT_INPUT, e) from e
    path = render_svg(ag, drawing, Path(args.out), config)
    _emit(make_report("render", ag, started, svg=str(path)), args.format, [f"  svg: {path}"])
    return EXIT_OK


COMMANDS = {
    "classify": (cmd_classify, "Report alignment complexity and edge classes"),
    "draw": (cmd_draw, "Draw a ccw star or parallel instance"),
    "verify": (cmd_verify, "Check a coordinates file against an instance"),
    "reduce": (cmd_reduce, "Reduce an instance and print its lift plan"),
    "search": (cmd_search, "Sample random drawings looking for an aligned one"),
    "trace": (cmd_trace, "Evaluate the counterexample inequalities on a drawing"),
    "render": (cmd_render, "Render a coordinates file to SVG"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", help="Instance JSON file or builtin:<name>")
    common.add_argument("--out", type=str, help="Output file (SVG for draw, JSON for reduce)")
    common.add_argument("--coords", type=str, help="Coordinates JSON file")
    common.add_argument("--trials", type=int, help="Number of search trials")
    common.add_argument("--seed", type=int, help="Search seed")
    common.add_argument(
        "--format", choices=["json", "text"], default="json", help="Report format (default: json)"
    )
    common.add_argument("--config", type=str, help="Custom YAML config overriding the defaults")

    parser = argparse.ArgumentParser(
        prog="aligned",
        description="Aligned drawings of plane graphs on line arrangements",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Environment Variables:
  ALIGNED_LOG  - Log level for diagnostics on stderr (DEBUG, INFO, WARNING, ERROR)

Examples:
  aligned classify builtin:pappus --format text
  aligned draw builtin:kstar3 --out kstar3.svg --coords kstar3.json
  aligned verify builtin:kstar3 --coords kstar3.json
  aligned search builtin:counterexample2 --trials 1000 --seed 7
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the aligned CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
    except ValueError as e:
        print(f"{Colors.RED}Error: {e}{Colors.NC}", file=sys.stderr)
        return EXIT_INPUT

    run = COMMANDS[args.command][0]
    try:
        return run(args, config)
    except CommandError as e:
        print(f"{Colors.RED}Error: {e}{Colors.NC}", file=sys.stderr)
        if args.format == "json" and isinstance(e.error, AlignedError):
            failure = {"schema": SCHEMA, "command": args.command, "error": error_detail(e.error)}
            print(json.dumps(failure, indent=2))
        return e.code
    except (EmbeddingError, GeometryError) as e:
        print(f"{Colors.RED}Error: {e}{Colors.NC}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
