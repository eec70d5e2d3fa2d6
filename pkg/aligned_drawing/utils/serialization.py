"""
JSON formats of the command-line tools.

Instances, coordinate files and reports are plain JSON. Rationals are written as "p/q"
strings so that nothing is lost; unknown fields are rejected.
"""

import hashlib
import json
import re
import time
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from aligned_drawing.core.aligned_model import build_aligned
from aligned_drawing.core.fixtures import builtin
from aligned_drawing.core.planar import build_embedding
from aligned_drawing.exceptions import AlignedError, InconsistentAnnotation
from aligned_drawing.models.aligned import (
    AlignedGraph,
    Arrangement,
    Crossing,
    CrossingSpec,
    Item,
    Placement,
    PlacementKind,
)
from aligned_drawing.models.drawing import Drawing, Geometry, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import Point
from aligned_drawing.models.plan import (
    DropInsertedPseudolines,
    LiftPlan,
    ReinsertSubgraph,
    Uncontract,
)

SCHEMA = "v1"
BUILTIN_PREFIX = "builtin:"

_RAT = re.compile(r"^-?\d+(/\d+)?$")

_PLACEMENT_TYPES = {
    "origin": PlacementKind.ORIGIN,
    "ray": PlacementKind.RAY,
    "layer": PlacementKind.LAYER,
    "cell": PlacementKind.CELL,
}

Source = Union[str, Path]


def _fail(message: str, witness: Any = None) -> InconsistentAnnotation:
    return InconsistentAnnotation(message, witness=witness)


def _fields(obj: Any, where: str, required: Iterable[str], optional: Iterable[str] = ()) -> None:
    if not isinstance(obj, dict):
        raise _fail(f"{where} must be an object")
    required = set(required)
    missing = required - set(obj)
    if missing:
        raise _fail(f"{where} is missing {sorted(missing)}", sorted(missing))
    unknown = set(obj) - required - set(optional)
    if unknown:
        raise _fail(f"{where} has unknown fields {sorted(unknown)}", sorted(unknown))


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(f"{where} must be an integer, got {value!r}")
    return value


# -- rationals ----------------------------------------------------------------


def format_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: Any) -> Fraction:
    """
    Parse an exact "p/q" (or integer) string.

    Raises:
        InconsistentAnnotation: For anything else, floats included
    """
    if not isinstance(text, str) or not _RAT.match(text.strip()):
        raise _fail(f"Not an exact rational: {text!r}", text)
    num, _, den = text.strip().partition("/")
    if den and int(den) == 0:
        raise _fail(f"Zero denominator in {text!r}", text)
    return Fraction(int(num), int(den) if den else 1)


# -- instances ----------------------------------------------------------------


def _arrangement(obj: Any) -> Arrangement:
    if not isinstance(obj, dict) or obj.get("kind") not in ("star", "parallel"):
        raise _fail("arrangement.kind must be 'star' or 'parallel'")
    if obj["kind"] == "star":
        _fields(obj, "arrangement", ["kind", "k"])
        return Arrangement.star(_int(obj["k"], "arrangement.k"))
    _fields(obj, "arrangement", ["kind", "m"])
    return Arrangement.parallel(_int(obj["m"], "arrangement.m"))


def _track_key(arr: Arrangement) -> str:
    return "ray" if arr.is_star else "layer"


def _placement(obj: Any, vid: str) -> Placement:
    where = f"placement of {vid}"
    _fields(obj, where, ["type"], ["index", "rank"])
    kind = _PLACEMENT_TYPES.get(obj["type"])
    if kind is None:
        raise _fail(f"{where} has unknown type {obj['type']!r}", vid)
    if kind is PlacementKind.ORIGIN:
        return Placement.origin()
    if "index" not in obj:
        raise _fail(f"{where} needs an index", vid)
    index = _int(obj["index"], f"{where}.index")
    if kind is PlacementKind.CELL:
        return Placement.in_cell(index)
    if "rank" not in obj:
        raise _fail(f"{where} needs a rank", vid)
    rank = _int(obj["rank"], f"{where}.rank")
    if kind is PlacementKind.RAY:
        return Placement.on_ray(index, rank)
    return Placement.on_layer(index, rank)


def instance_from_dict(doc: Any) -> AlignedGraph:
    """
    Build and validate an instance from its JSON document.

    Raises:
        InconsistentAnnotation: For malformed documents and inconsistent annotations
        EmbeddingError: If the rotation system is not a plane embedding
    """
    required = ["arrangement", "vertices", "edges", "rotation", "outer_face"]
    _fields(doc, "instance", required, ["schema"])
    arr = _arrangement(doc["arrangement"])
    for key in ("vertices", "edges"):
        if not isinstance(doc[key], list):
            raise _fail(f"{key} must be a list")
    if not isinstance(doc["rotation"], dict):
        raise _fail("rotation must map vertex ids to edge lists")

    placement: Dict[str, Placement] = {}
    ranked: Dict[int, List[Tuple[int, Item]]] = {}
    for v in doc["vertices"]:
        _fields(v, "vertex", ["id", "placement"])
        vid = v["id"]
        if vid in placement:
            raise _fail(f"Vertex {vid} listed twice", vid)
        pl = _placement(v["placement"], vid)
        placement[vid] = pl
        if pl.on_track:
            ranked.setdefault(pl.index, []).append((pl.rank, ("v", vid)))  # type: ignore[arg-type]

    edges: Dict[str, Tuple[str, str]] = {}
    crossings: Dict[str, CrossingSpec] = {}
    track_key = _track_key(arr)
    for e in doc["edges"]:
        _fields(e, "edge", ["id", "tail", "head"], ["aligned", "crossings", "side"])
        eid = e["id"]
        if eid in edges:
            raise _fail(f"Edge {eid} listed twice", eid)
        edges[eid] = (e["tail"], e["head"])
        items = []
        for c in e.get("crossings", []):
            _fields(c, f"crossing of {eid}", [track_key, "rank"])
            track = _int(c[track_key], f"crossing of {eid}")
            rank = _int(c["rank"], f"crossing rank of {eid}")
            items.append(Crossing(track, rank))
            ranked.setdefault(track, []).append((rank, ("x", eid)))
        side = e.get("side")
        crossings[eid] = CrossingSpec(
            tuple(items),
            bool(e.get("aligned", False)),
            None if side is None else _int(side, f"side of {eid}"),
        )

    orders: Dict[int, Tuple[Item, ...]] = {}
    for t, items in ranked.items():
        ranks = sorted(r for r, _ in items)
        if ranks != list(range(1, len(items) + 1)):
            raise _fail(f"Ranks on track {t} are not 1..{len(items)}: {ranks}", t)
        orders[t] = tuple(item for _, item in sorted(items))

    outer = doc["outer_face"]
    if not isinstance(outer, list) or (edges and not outer):
        raise _fail("outer_face must list the darts of the outer face")
    darts = []
    for d in outer:
        _fields(d, "outer_face dart", ["edge", "tail"])
        darts.append((d["edge"], d["tail"]))
    graph = build_embedding(list(placement), doc["rotation"], edges, darts[0] if darts else None)
    if darts:
        face = graph.face_of.get(darts[0])
        if face is None or any(d not in face.darts for d in darts):
            raise _fail("outer_face darts do not bound one face", darts)
    return build_aligned(graph, arr, placement, crossings, orders)


def instance_to_dict(ag: AlignedGraph) -> Dict[str, Any]:
    arr = ag.arr
    arrangement: Dict[str, Any] = {"kind": arr.kind.value}
    arrangement["k" if arr.is_star else "m"] = arr.size
    names = {v: k for k, v in _PLACEMENT_TYPES.items()}
    vertices = []
    for v in ag.vertices:
        pl = ag.placement[v]
        entry: Dict[str, Any] = {"type": names[pl.kind]}
        if not pl.is_origin:
            entry["index"] = pl.index
        if pl.on_track:
            entry["rank"] = pl.rank
        vertices.append({"id": v, "placement": entry})
    edges = []
    for e, (a, b) in ag.edges.items():
        spec = ag.crossings[e]
        entry: Dict[str, Any] = {"id": e, "tail": a, "head": b}
        if spec.aligned:
            entry["aligned"] = True
        if spec.crossings:
            key = _track_key(arr)
            entry["crossings"] = [{key: c.track, "rank": c.rank} for c in spec.crossings]
        if spec.side is not None:
            entry["side"] = spec.side
        edges.append(entry)
    outer = ag.graph.outer_face
    return {
        "schema": SCHEMA,
        "arrangement": arrangement,
        "vertices": vertices,
        "edges": edges,
        "rotation": {v: list(ag.graph.rotation[v]) for v in ag.vertices},
        "outer_face": [{"edge": e, "tail": t} for e, t in outer.darts] if outer else [],
    }


def _read_json(path: Path) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise _fail(f"Invalid JSON in {path}: {e}") from e


def load_instance(source: Source) -> AlignedGraph:
    """
    Load an instance from a JSON file or a "builtin:<name>" reference.

    Raises:
        FileNotFoundError: If the file doesn't exist
        UnknownInstance: If the builtin name is unknown
        AlignedError: If the document is malformed or inconsistent
    """
    text = str(source)
    if text.startswith(BUILTIN_PREFIX):
        return builtin(text[len(BUILTIN_PREFIX) :])
    path = Path(text)
    if not path.exists():
        raise FileNotFoundError(f"Instance file not found: {path}")
    return instance_from_dict(_read_json(path))


def write_json(doc: Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def dump_instance(ag: AlignedGraph, path: Path) -> Path:
    return write_json(instance_to_dict(ag), path)


def instance_hash(ag: AlignedGraph) -> str:
    """sha256 of the canonical JSON form of an instance."""
    canonical = json.dumps(instance_to_dict(ag), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# -- coordinates --------------------------------------------------------------


def _point(p: Point) -> List[str]:
    return [format_rat(p.x), format_rat(p.y)]


def _parse_point(value: Any, where: str) -> Point:
    if not isinstance(value, list) or len(value) != 2:
        raise _fail(f"{where} must be a pair of rationals")
    return Point(parse_rat(value[0]), parse_rat(value[1]))


def geometry_to_dict(geom: Geometry) -> Dict[str, Any]:
    if isinstance(geom, StarGeometry):
        return {"kind": "star", "directions": [_point(d) for d in geom.directions[: geom.k]]}
    return {"kind": "parallel", "ys": [format_rat(y) for y in geom.ys]}


def geometry_from_dict(obj: Any) -> Geometry:
    if not isinstance(obj, dict) or obj.get("kind") not in ("star", "parallel"):
        raise _fail("geometry.kind must be 'star' or 'parallel'")
    if obj["kind"] == "star":
        _fields(obj, "geometry", ["kind", "directions"])
        upper = [_parse_point(d, "direction") for d in obj["directions"]]
        return StarGeometry(tuple(upper + [-d for d in upper]))
    _fields(obj, "geometry", ["kind", "ys"])
    return ParallelGeometry(tuple(parse_rat(y) for y in obj["ys"]))


def coords_to_dict(d: Drawing) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "geometry": geometry_to_dict(d.lines),
        "coords": {v: _point(p) for v, p in sorted(d.coords.items())},
    }


def coords_from_dict(doc: Any) -> Drawing:
    _fields(doc, "coordinates", ["schema", "geometry", "coords"])
    if doc["schema"] != SCHEMA:
        raise _fail(f"Unsupported schema {doc['schema']!r}")
    if not isinstance(doc["coords"], dict):
        raise _fail("coords must map vertex ids to points")
    coords = {v: _parse_point(p, f"coordinates of {v}") for v, p in doc["coords"].items()}
    return Drawing(geometry_from_dict(doc["geometry"]), coords)


def load_coords(path: Path) -> Drawing:
    if not path.exists():
        raise FileNotFoundError(f"Coordinates file not found: {path}")
    return coords_from_dict(_read_json(path))


def dump_coords(d: Drawing, path: Path) -> Path:
    return write_json(coords_to_dict(d), path)


# -- plans and reports --------------------------------------------------------


def plan_to_list(plan: LiftPlan) -> List[Dict[str, Any]]:
    """Readable journal of a lift plan; nested instances are summarized by their vertices."""
    steps = []
    for step in plan:
        entry: Dict[str, Any] = {"step": type(step).__name__}
        if isinstance(step, Uncontract):
            entry.update(removed=step.removed, survivor=step.survivor, track=step.track)
        elif isinstance(step, ReinsertSubgraph):
            entry.update(triangle=list(step.triangle))
            if step.inner is not None:
                entry.update(inner=list(step.inner.vertices))
            if step.plan is not None:
                entry.update(plan=plan_to_list(step.plan))
        elif isinstance(step, DropInsertedPseudolines):
            entry.update(original=list(step.original), size=step.size)
        else:
            fields = asdict(step)
            entry.update({k: list(v) if isinstance(v, tuple) else v for k, v in fields.items()})
        steps.append(entry)
    return steps


def make_report(
    command: str,
    ag: Optional[AlignedGraph],
    started: float,
    seed: Optional[int] = None,
    **payload: Any,
) -> Dict[str, Any]:
    """Report envelope shared by every command; started is a time.perf_counter() value."""
    report: Dict[str, Any] = {
        "schema": SCHEMA,
        "command": command,
        "instance_hash": instance_hash(ag) if ag is not None else None,
        "seed": seed,
        "timing": {"seconds": round(time.perf_counter() - started, 6)},
    }
    report.update(payload)
    return report


def error_detail(error: AlignedError) -> Dict[str, Any]:
    return {"type": type(error).__name__, "message": str(error), "witness": _plain(error.witness)}


def _plain(value: Any) -> Any:
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return format_rat(value)
    if value is None or isinstance(value, (str, int, bool)):
        return value
    return str(value)
