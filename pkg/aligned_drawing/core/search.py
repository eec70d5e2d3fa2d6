"""
Randomized search for aligned drawings.

Each trial samples a drawing that respects vertex placements and the order of vertices
along every track, then runs the verifier on it. Trial t draws from its own generator
seeded with (seed, t), so results do not depend on the order trials run in.
"""

import random
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional

from aligned_drawing.core.arrangement import layer_gap_point, track_point, wedge_combination
from aligned_drawing.core.star_drawer import make_star_geometry
from aligned_drawing.core.verifier import verify_aligned
from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.drawing import Drawing, Geometry, ParallelGeometry, StarGeometry
from aligned_drawing.models.geometry import ORIGIN, Point
from aligned_drawing.models.report import SearchResult
from aligned_drawing.utils.logger import logger

DEFAULT_BOX_EXPONENT = 10
DEFAULT_SEED = 7
RESOLUTION = 256


def _values(rng: random.Random, lo: int, hi: int, count: int) -> List[Fraction]:
    """count distinct sorted multiples of 1/RESOLUTION in the open interval (lo, hi)."""
    picks = rng.sample(range(lo * RESOLUTION + 1, hi * RESOLUTION), count)
    return [Fraction(x, RESOLUTION) for x in sorted(picks)]


def default_geometry(ag: AlignedGraph) -> Geometry:
    if ag.arr.is_star:
        return make_star_geometry(ag.arr.size)
    return ParallelGeometry(tuple(Fraction(i) for i in range(ag.arr.size)))


def sample_drawing(
    ag: AlignedGraph, geom: Geometry, rng: random.Random, bound: int
) -> Drawing:
    """One random drawing with every vertex in its cell and every track in order."""
    coords: Dict[str, Point] = {}
    for t in range(ag.arr.n_tracks):
        on = ag.vertices_on(t)
        if not on:
            continue
        if isinstance(geom, StarGeometry):
            params = _values(rng, 0, bound, len(on))
            for v, s in zip(on, params):
                coords[v] = track_point(geom, t, s)
        else:
            for v, x in zip(on, _values(rng, -bound, bound, len(on))):
                coords[v] = Point(x, geom.ys[t])
    for v in ag.vertices:
        pl = ag.placement[v]
        if pl.is_origin:
            coords[v] = ORIGIN
        elif pl.is_free:
            cell: int = pl.index  # type: ignore[assignment]
            if isinstance(geom, StarGeometry):
                alpha, beta = _values(rng, 0, bound, 2)
                if rng.random() < 0.5:
                    alpha, beta = beta, alpha
                coords[v] = wedge_combination(geom, cell, alpha, beta)
            else:
                x = _values(rng, -bound, bound, 1)[0]
                frac = Fraction(rng.randrange(1, RESOLUTION), RESOLUTION)
                coords[v] = layer_gap_point(geom, cell, x, frac)
    return Drawing(geom, coords)


def random_search(
    ag: AlignedGraph,
    trials: int,
    seed: int = DEFAULT_SEED,
    box_exponent: int = DEFAULT_BOX_EXPONENT,
    geom: Optional[Geometry] = None,
) -> SearchResult:
    """
    Look for an aligned drawing by sampling.

    Args:
        ag: Instance to draw
        trials: Number of samples, at least 1
        seed: Base seed; trial t uses the generator seeded with "seed:t"
        box_exponent: Coordinates stay within 2**box_exponent of the origin
        geom: Line geometry to sample on (default: the standard one for ag)

    Returns:
        SearchResult with the first verified drawing, or the fewest failed checks seen
        and a histogram of the first failing property per trial
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    geom = geom or default_geometry(ag)
    bound = 1 << box_exponent
    histogram: Counter = Counter()
    best: Optional[int] = None
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        d = sample_drawing(ag, geom, rng, bound)
        report = verify_aligned(ag, d)
        if report.passed:
            logger.info(f"trial {t} found an aligned drawing")
            return SearchResult(True, d, t + 1, 0, dict(histogram))
        failed = len(report.failures)
        best = failed if best is None else min(best, failed)
        histogram[report.first_failure.prop] += 1  # type: ignore[union-attr]
    logger.info(f"no aligned drawing in {trials} trials; best miss fails {best} checks")
    return SearchResult(False, None, trials, best, dict(histogram))
