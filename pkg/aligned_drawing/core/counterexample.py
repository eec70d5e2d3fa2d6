"""
The inequality chain showing that counterexample2 has no aligned drawing.

Coordinates are taken in the basis of the drawing's two ray directions, so the chain
holds for any straight two-line star, not only for perpendicular axes.
"""

from fractions import Fraction
from typing import Tuple

from aligned_drawing.core.arrangement import track_param
from aligned_drawing.core.exactgeom import orient
from aligned_drawing.core.star_drawer import ray_param
from aligned_drawing.exceptions import WrongInstance
from aligned_drawing.models.drawing import Drawing, StarGeometry
from aligned_drawing.models.geometry import ORIGIN, Orientation, Point
from aligned_drawing.models.report import CounterexampleTrace, InequalityCheck

INDICES = (1, 2, 3, 4)
VERTICES = tuple(f"{kind}{i}" for kind in "uvw" for i in INDICES)


def _next(i: int) -> int:
    return i % 4 + 1


def axis_ray(i: int) -> int:
    """Ray carrying u_i; v_i lies in the cell after it."""
    return (2 - i) % 4


def basis_coords(geom: StarGeometry, p: Point) -> Tuple[Fraction, Fraction]:
    """(x, y) with p = x * direction(0) + y * direction(1)."""
    d0, d1 = geom.direction(0), geom.direction(1)
    det = d0.cross(d1)
    return p.cross(d1) / det, d0.cross(p) / det


def counterexample_trace(d: Drawing) -> CounterexampleTrace:
    """
    Evaluate every premise and inequality of the impossibility argument on a drawing.

    For each i the crossing premise says that g_i = u_{i+1}v_i meets the ray of u_i
    beyond u_i; it implies |x_i| < (l_{i+1}/l_i)|y_i| for odd i and the same with x and y
    swapped for even i. The estimate premise says that v_i lies on the origin's side of
    the line through v_{i+1} and w_i; it implies |y_i| < |y_{i+1}| for odd i and
    |x_i| < |x_{i+1}| for even i.

    Raises:
        WrongInstance: If the drawing is not on a two-line star or misses a vertex
    """
    geom = d.lines
    if not isinstance(geom, StarGeometry) or geom.k != 2:
        raise WrongInstance("The trace needs a drawing on a two-line star")
    missing = [v for v in VERTICES if v not in d.coords]
    if missing:
        raise WrongInstance(f"Drawing has no coordinates for {missing}", witness=missing)
    c = d.coords
    lam = {i: track_param(geom, axis_ray(i), c[f"u{i}"]) for i in INDICES}
    xy = {i: basis_coords(geom, c[f"v{i}"]) for i in INDICES}
    ax = {i: abs(xy[i][0]) for i in INDICES}
    ay = {i: abs(xy[i][1]) for i in INDICES}

    crossing = []
    estimate = []
    for i in INDICES:
        j = _next(i)
        hit = ray_param(d, axis_ray(i), c[f"u{j}"], c[f"v{i}"])
        premise = hit is not None and hit > lam[i]
        ratio = lam[j] / lam[i] if lam[i] > 0 else Fraction(0)
        if i % 2:
            crossing.append(InequalityCheck(i, premise, ax[i], ratio * ay[i]))
        else:
            crossing.append(InequalityCheck(i, premise, ay[i], ratio * ax[i]))

        side = orient(c[f"v{j}"], c[f"w{i}"], c[f"v{i}"])
        premise = side is not Orientation.COLLINEAR and side is orient(
            c[f"v{j}"], c[f"w{i}"], ORIGIN
        )
        if i % 2:
            estimate.append(InequalityCheck(i, premise, ay[i], ay[j]))
        else:
            estimate.append(InequalityCheck(i, premise, ax[i], ax[j]))

    left = ax[1] * ay[2] * ax[3] * ay[4]
    middle = ay[1] * ax[2] * ay[3] * ax[4]
    return CounterexampleTrace([lam[i] for i in INDICES], crossing, estimate, left, middle)
