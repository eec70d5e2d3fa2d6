"""Algorithms: embeddings, reductions, drawers, verification and search."""

from aligned_drawing.core.aligned_model import alignment_complexity, build_aligned, orient_ccw
from aligned_drawing.core.counterexample import counterexample_trace
from aligned_drawing.core.parallel_drawer import draw_parallel
from aligned_drawing.core.reduce_parallel import reduce_parallel
from aligned_drawing.core.reduce_star import reduce_star
from aligned_drawing.core.search import random_search
from aligned_drawing.core.star_drawer import draw_ccw
from aligned_drawing.core.verifier import verify_aligned

__all__ = [
    "alignment_complexity",
    "build_aligned",
    "orient_ccw",
    "counterexample_trace",
    "draw_parallel",
    "reduce_parallel",
    "reduce_star",
    "random_search",
    "draw_ccw",
    "verify_aligned",
]
