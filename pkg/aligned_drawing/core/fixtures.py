"""
Built-in instances.

Each builder returns a validated AlignedGraph; the CLI reaches them through the
"builtin:<name>" source syntax.
"""

from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from aligned_drawing.core.aligned_model import build_aligned
from aligned_drawing.core.planar import build_embedding
from aligned_drawing.exceptions import UnknownInstance
from aligned_drawing.models.aligned import (
    AlignedGraph,
    Arrangement,
    Crossing,
    CrossingSpec,
    Item,
    Placement,
)
from aligned_drawing.models.embedding import Dart


def _instance(
    arr: Arrangement,
    placement: Mapping[str, Placement],
    edges: Mapping[str, Tuple[str, str]],
    rotation: Mapping[str, Sequence[str]],
    outer: Dart,
    crossings: Mapping[str, CrossingSpec],
    orders: Mapping[int, Sequence[Item]],
) -> AlignedGraph:
    graph = build_embedding(list(placement), rotation, edges, outer)
    specs = {e: crossings.get(e, CrossingSpec()) for e in edges}
    return build_aligned(graph, arr, placement, specs, orders)


def _crossing(*tracks: int) -> CrossingSpec:
    return CrossingSpec(tuple(Crossing(t) for t in tracks))


def _cyclic(i: int) -> int:
    return (i - 1) % 4 + 1


def _four_cycle(k: int, ray_of: Callable[[int], int], cell_of: Callable[[int], int]) -> Dict:
    """Vertices, edges and rotations shared by the four-fold counterexample family."""
    placement: Dict[str, Placement] = {}
    edges: Dict[str, Tuple[str, str]] = {}
    rotation: Dict[str, List[str]] = {}
    n = 2 * k
    for i in range(1, 5):
        nxt, prv = _cyclic(i + 1), _cyclic(i - 1)
        placement[f"u{i}"] = Placement.on_ray(ray_of(i))
        placement[f"v{i}"] = Placement.in_cell(cell_of(i))
        placement[f"w{i}"] = Placement.on_ray((ray_of(i) + n // 4) % n)
        edges[f"a{i}"] = (f"u{i}", f"v{i}")
        edges[f"b{i}"] = (f"v{i}", f"w{i}")
        edges[f"g{i}"] = (f"u{nxt}", f"v{i}")
        edges[f"h{i}"] = (f"v{nxt}", f"w{i}")
        rotation[f"u{i}"] = [f"a{i}", f"g{prv}"]
        rotation[f"v{i}"] = [f"a{i}", f"g{i}", f"b{i}", f"h{prv}"]
        rotation[f"w{i}"] = [f"b{i}", f"h{i}"]
    return {"placement": placement, "edges": edges, "rotation": rotation}


def counterexample2() -> AlignedGraph:
    """
    Aligned graph on a 2-line star with complexity (bot,1,bot) that admits no
    aligned drawing.

    Ray c_i = (2 - i) mod 4 carries u_i, the crossings of g_i and h_i, then w_{i+1}.
    """

    def ray(i: int) -> int:
        return (2 - i) % 4

    base = _four_cycle(2, ray, ray)
    crossings = {}
    orders: Dict[int, List[Item]] = {}
    for i in range(1, 5):
        c = ray(i)
        crossings[f"g{i}"] = _crossing(c)
        crossings[f"h{i}"] = _crossing(c)
        orders[c] = [("v", f"u{i}"), ("x", f"g{i}"), ("x", f"h{i}"), ("v", f"w{_cyclic(i + 1)}")]
    return _instance(
        Arrangement.star(2), outer=("h2", "w2"), crossings=crossings, orders=orders, **base
    )


def pappus() -> AlignedGraph:
    """
    The same graph on a 4-line star, with every former ray doubled by a new pseudoline.

    Complexity (bot,3,bot); forgetting the odd pseudolines gives counterexample2 back.
    """

    def ray(i: int) -> int:
        return 2 * ((2 - i) % 4)

    def cell(i: int) -> int:
        return ray(i) + 1

    base = _four_cycle(4, ray, cell)
    crossings = {}
    orders: Dict[int, List[Item]] = {}
    for i in range(1, 5):
        r = ray(i)
        prv = _cyclic(i - 1)
        crossings[f"a{i}"] = _crossing(r + 1)
        crossings[f"g{i}"] = _crossing((r - 1) % 8, r, r + 1)
        crossings[f"h{i}"] = _crossing(r, r + 1)
        orders[r] = [("v", f"u{i}"), ("x", f"g{i}"), ("x", f"h{i}"), ("v", f"w{_cyclic(i + 1)}")]
        orders[r + 1] = [("x", f"g{prv}"), ("x", f"a{i}"), ("x", f"g{i}"), ("x", f"h{i}")]
    return _instance(
        Arrangement.star(4), outer=("h2", "w2"), crossings=crossings, orders=orders, **base
    )


def fig1a() -> AlignedGraph:
    """Two layer vertices joined to one vertex above and one below; p->q crosses the layer."""
    placement = {
        "a": Placement.on_layer(0),
        "b": Placement.on_layer(0),
        "p": Placement.in_cell(1),
        "q": Placement.in_cell(0),
    }
    edges = {
        "ab": ("a", "b"),
        "ap": ("a", "p"),
        "bp": ("b", "p"),
        "aq": ("a", "q"),
        "bq": ("b", "q"),
        "pq": ("p", "q"),
    }
    rotation = {
        "a": ["ab", "ap", "aq"],
        "b": ["bp", "ab", "bq"],
        "p": ["ap", "bp", "pq"],
        "q": ["pq", "bq", "aq"],
    }
    crossings = {"ab": CrossingSpec(aligned=True), "pq": _crossing(0)}
    orders = {0: [("v", "a"), ("v", "b"), ("x", "pq")]}
    return _instance(
        Arrangement.parallel(1), placement, edges, rotation, ("pq", "p"), crossings, orders
    )


def fig1d() -> AlignedGraph:
    """Four vertices on a 2-line star with complexity (2,1,bot)."""
    placement = {
        "u": Placement.on_ray(0),
        "p": Placement.in_cell(0),
        "q": Placement.in_cell(2),
        "r": Placement.in_cell(1),
    }
    edges = {"up": ("u", "p"), "pq": ("p", "q"), "ur": ("u", "r"), "rq": ("r", "q")}
    rotation = {"u": ["ur", "up"], "p": ["up", "pq"], "q": ["pq", "rq"], "r": ["rq", "ur"]}
    crossings = {"pq": _crossing(1, 2), "ur": _crossing(1), "rq": _crossing(2)}
    orders = {
        0: [("v", "u")],
        1: [("x", "pq"), ("x", "ur")],
        2: [("x", "pq"), ("x", "rq")],
    }
    return _instance(
        Arrangement.star(2), placement, edges, rotation, ("up", "u"), crossings, orders
    )


def fig4d() -> AlignedGraph:
    """One free vertex between two separating edges of the same cell (an open comb)."""
    placement = {
        "u1": Placement.on_ray(0),
        "u2": Placement.on_ray(0),
        "w1": Placement.on_ray(1),
        "w2": Placement.on_ray(1),
        "v": Placement.in_cell(0),
    }
    edges = {
        "e": ("u1", "w1"),
        "f": ("u2", "w2"),
        "u1v": ("u1", "v"),
        "u2v": ("u2", "v"),
        "vw1": ("v", "w1"),
        "vw2": ("v", "w2"),
        "u1u2": ("u1", "u2"),
        "w1w2": ("w1", "w2"),
    }
    rotation = {
        "u1": ["u1u2", "u1v", "e"],
        "u2": ["f", "u2v", "u1u2"],
        "w1": ["w1w2", "e", "vw1"],
        "w2": ["w1w2", "vw2", "f"],
        "v": ["vw2", "vw1", "u1v", "u2v"],
    }
    crossings = {"u1u2": CrossingSpec(aligned=True), "w1w2": CrossingSpec(aligned=True)}
    orders = {0: [("v", "u1"), ("v", "u2")], 1: [("v", "w1"), ("v", "w2")]}
    return _instance(
        Arrangement.star(2), placement, edges, rotation, ("u1u2", "u2"), crossings, orders
    )


def kstar3() -> AlignedGraph:
    """
    Wheel on a 3-line star: a vertex on every ray, the origin joined to all of them, a
    free vertex outside the ring in Q0 and one in Q2 reached by an edge crossing ray 2.
    """
    placement: Dict[str, Placement] = {"o": Placement.origin()}
    edges: Dict[str, Tuple[str, str]] = {}
    crossings: Dict[str, CrossingSpec] = {}
    for j in range(6):
        placement[f"a{j}"] = Placement.on_ray(j)
        edges[f"s{j}"] = ("o", f"a{j}")
        edges[f"r{j}"] = (f"a{j}", f"a{(j + 1) % 6}")
        crossings[f"s{j}"] = CrossingSpec(aligned=True)
    placement["f"] = Placement.in_cell(0)
    placement["g"] = Placement.in_cell(2)
    edges.update(
        {
            "a0f": ("a0", "f"),
            "fa1": ("f", "a1"),
            "a1g": ("a1", "g"),
            "a2g": ("a2", "g"),
            "ga3": ("g", "a3"),
        }
    )
    crossings["a1g"] = _crossing(2)
    rotation = {
        "o": [f"s{j}" for j in range(6)],
        "a0": ["a0f", "r0", "s0", "r5"],
        "a1": ["a1g", "r1", "s1", "r0", "fa1"],
        "a2": ["a2g", "r2", "s2", "r1"],
        "a3": ["r3", "s3", "r2", "ga3"],
        "a4": ["r4", "s4", "r3"],
        "a5": ["r5", "s5", "r4"],
        "f": ["fa1", "a0f"],
        "g": ["ga3", "a2g", "a1g"],
    }
    orders: Dict[int, List[Item]] = {j: [("v", f"a{j}")] for j in range(6)}
    orders[2].append(("x", "a1g"))
    return _instance(
        Arrangement.star(3), placement, edges, rotation, ("a0f", "f"), crossings, orders
    )


BUILTINS: Dict[str, Callable[[], AlignedGraph]] = {
    "counterexample2": counterexample2,
    "fig4a": counterexample2,
    "pappus": pappus,
    "fig1a": fig1a,
    "fig1d": fig1d,
    "fig4d": fig4d,
    "kstar3": kstar3,
}


def builtin(name: str) -> AlignedGraph:
    """
    Build a named instance.

    Raises:
        UnknownInstance: If no instance has this name
    """
    if name not in BUILTINS:
        raise UnknownInstance(
            f"Unknown instance {name!r}; available: {', '.join(sorted(BUILTINS))}", witness=name
        )
    return BUILTINS[name]()
