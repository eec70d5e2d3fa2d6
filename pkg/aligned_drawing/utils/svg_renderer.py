"""SVG rendering of aligned drawings using drawsvg."""

import math
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import drawsvg as draw

from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.config import ToolConfig
from aligned_drawing.models.drawing import Drawing, ParallelGeometry, StarGeometry

LINE_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")
CELL_FILLS = ("#f4f4f4", "#e9eef6")
EDGE_COLOR = "#222222"
GUIDE_COLOR = "#7f7f7f"
VERTEX_FILL = "#ffffff"
MARGIN = 1.5

NOTE = "coordinates below are decimal approximations; the exact values are in the coords file"


class SvgRenderer:
    """Renders a drawing with its line arrangement."""

    def __init__(self, config: Optional[ToolConfig] = None):
        self.config = config or ToolConfig()

    def _num(self, value: Fraction) -> float:
        return float(f"{float(value) * self.config.svg_scale:.{self.config.svg_digits}g}")

    def _xy(self, x: Fraction, y: Fraction) -> Tuple[float, float]:
        # drawsvg's y-axis points down
        return self._num(x), -self._num(y)

    def _extent(self, d: Drawing, extra_ys: Sequence[Fraction]) -> Fraction:
        values = [abs(c) for p in d.coords.values() for c in (p.x, p.y)]
        if isinstance(d.lines, ParallelGeometry):
            values.extend(abs(y) for y in (*d.lines.ys, *extra_ys))
        return max(values, default=Fraction(1)) + Fraction(MARGIN)

    def render(
        self, ag: AlignedGraph, d: Drawing, inserted_ys: Sequence[Fraction] = ()
    ) -> draw.Drawing:
        """Render the arrangement, its cells, the edges and the vertices."""
        r = self._extent(d, inserted_ys)
        side = 2 * self._num(r)
        canvas = draw.Drawing(side, side, origin="center")

        if isinstance(d.lines, StarGeometry):
            self._render_star(canvas, d.lines, r)
        else:
            self._render_layers(canvas, d.lines, inserted_ys, r)

        for a, b in ag.edges.values():
            if a in d.coords and b in d.coords:
                pa, pb = d.coords[a], d.coords[b]
                start, end = self._xy(pa.x, pa.y), self._xy(pb.x, pb.y)
                canvas.append(draw.Line(*start, *end, stroke=EDGE_COLOR, stroke_width=1.5))

        origin = ag.origin_vertex()
        for v, p in sorted(d.coords.items()):
            x, y = self._xy(p.x, p.y)
            canvas.append(
                draw.Circle(x, y, 4, fill=VERTEX_FILL, stroke=EDGE_COLOR, stroke_width=1.2)
            )
            if v == origin:
                canvas.append(draw.Circle(x, y, 7, fill="none", stroke=EDGE_COLOR))
            canvas.append(draw.Text(v, 10, x + 6, y - 6, fill=EDGE_COLOR))
        return canvas

    def _render_star(self, canvas: draw.Drawing, geom: StarGeometry, r: Fraction) -> None:
        n = len(geom.directions)
        ends: List[Tuple[float, float]] = []
        for t in range(n):
            d = geom.direction(t)
            length = math.hypot(float(d.x), float(d.y))
            scale = float(r) * self.config.svg_scale / length
            ends.append((float(d.x) * scale, -float(d.y) * scale))
        for cell in range(n):
            (x1, y1), (x2, y2) = ends[cell], ends[(cell + 1) % n]
            fill = CELL_FILLS[cell % 2]
            canvas.append(draw.Lines(0, 0, x1, y1, x2, y2, close=True, fill=fill, stroke="none"))
        for t in range(n):
            color = LINE_COLORS[(t % geom.k) % len(LINE_COLORS)]
            canvas.append(draw.Line(0, 0, *ends[t], stroke=color, stroke_width=2))
        canvas.append(draw.Circle(0, 0, 3, fill=EDGE_COLOR))

    def _render_layers(
        self,
        canvas: draw.Drawing,
        geom: ParallelGeometry,
        inserted_ys: Sequence[Fraction],
        r: Fraction,
    ) -> None:
        left, right = self._num(-r), self._num(r)
        bounds = [-r, *geom.ys, r]
        for cell in range(len(bounds) - 1):
            lo, hi = -self._num(bounds[cell]), -self._num(bounds[cell + 1])
            canvas.append(
                draw.Rectangle(
                    left, hi, right - left, lo - hi, fill=CELL_FILLS[cell % 2], stroke="none"
                )
            )
        for i, y in enumerate(geom.ys):
            color = LINE_COLORS[i % len(LINE_COLORS)]
            h = -self._num(y)
            canvas.append(draw.Line(left, h, right, h, stroke=color, stroke_width=2))
        for y in inserted_ys:
            h = -self._num(y)
            canvas.append(
                draw.Line(
                    left, h, right, h, stroke=GUIDE_COLOR, stroke_width=1, stroke_dasharray="6,4"
                )
            )


def render_svg(
    ag: AlignedGraph,
    d: Drawing,
    path: Path,
    config: Optional[ToolConfig] = None,
    inserted_ys: Sequence[Fraction] = (),
) -> Path:
    """
    Write an SVG picture of an aligned drawing.

    Args:
        ag: Instance the drawing belongs to
        d: Exact drawing
        path: Output file
        config: Scale and precision settings
        inserted_ys: Heights of helper layers, drawn dashed

    Returns:
        The written path
    """
    svg = SvgRenderer(config).render(ag, d, inserted_ys).as_svg()
    head, sep, body = svg.partition("?>")
    if sep:
        svg = f"{head}{sep}\n<!-- {NOTE} -->{body}"
    else:
        svg = f"<!-- {NOTE} -->\n{svg}"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg)
    return path
