"""
Face-local construction stages of the star reduction.

Every stage edits one planarization in place through its insertion primitives and
journals what it added, so the lift can forget it again. New graph ids start with "~"
and new crossing nodes with "@n", which keeps them apart from input ids.
"""

from typing import Dict, List, Optional, Sequence, Tuple

from aligned_drawing.core.aligned_model import is_separating
from aligned_drawing.core.planarization import NodeKind, PEdgeKind, PNode, Planarization
from aligned_drawing.exceptions import CannotTriangulate, OriginUnsupported, PreconditionFailed
from aligned_drawing.models.aligned import AlignedGraph
from aligned_drawing.models.embedding import Dart
from aligned_drawing.models.plan import (
    DropOriginGadget,
    DropOuterCycle,
    LiftPlan,
    RemoveGadget,
    RestoreSeparatingEdge,
)
from aligned_drawing.utils.logger import logger

# z on the side of a gate nearest its start dart, z nearest its end
GateSide = Tuple[str, str]


def tail_index(face: Sequence[Dart], node: str, start: int = 0) -> int:
    """Position of the first dart of face at or after start whose tail is node."""
    for i in range(start, len(face)):
        if face[i][1] == node:
            return i
    raise CannotTriangulate(f"{node} does not bound the face", witness=node)


class StarReduction:
    """
    Staged rewrite of a counterclockwise star instance on its planarization.

    The stages are meant to run in the order gadget, origin, outer_cycle, collar,
    saturate, triangulate; each can also run alone on a suitable instance.
    """

    def __init__(self, ag: AlignedGraph):
        self.ag = ag
        self.p = Planarization.from_aligned(ag)
        self.plan = LiftPlan()
        self.outer: List[str] = []
        self._new_vertices: List[str] = []
        self._new_edges: List[str] = []

    def to_aligned(self) -> AlignedGraph:
        return self.p.to_aligned()

    # -- helpers ----------------------------------------------------------

    def _seg_out(self, nid: str, track: int) -> str:
        for eid in self.p.rs.rot[nid]:
            pe = self.p.pedges[eid]
            if pe.kind is PEdgeKind.SEG and pe.track == track and self.p.rs.edges[eid][0] == nid:
                return eid
        raise PreconditionFailed(f"No segment of track {track} leaves {nid}", witness=nid)

    def _seg_in(self, nid: str, track: int) -> str:
        for eid in self.p.rs.rot[nid]:
            pe = self.p.pedges[eid]
            if pe.kind is PEdgeKind.SEG and pe.track == track and self.p.rs.edges[eid][1] == nid:
                return eid
        raise PreconditionFailed(f"No segment of track {track} enters {nid}", witness=nid)

    def _is_g_dart(self, dart: Dart) -> bool:
        eid, tail = dart
        pe = self.p.pedges[eid]
        if not self.p.is_real(tail):
            return False
        return pe.kind is PEdgeKind.PIECE or (pe.kind is PEdgeKind.SEG and pe.g_edge is not None)

    def _anchored(self, v: str) -> bool:
        return v == self.p.origin or self.p.track_of(v) is not None

    # -- separating edges -------------------------------------------------

    def gadget(self) -> None:
        """Replace every separating edge uv by the quadrangle u, w1, v, w2."""
        for e in sorted(self.ag.edges):
            if is_separating(self.ag, e):
                self._gadget_edge(e)
        n = len(self.plan.of_type(RestoreSeparatingEdge))
        logger.debug(f"gadgeted {n} separating edges")

    def _gadget_edge(self, e: str) -> None:
        p = self.p
        u, v = p.g_dir[e]
        cells = self.ag.cells[e]
        i = cells[0]
        w1, w2 = p.fresh("~w"), p.fresh("~w")
        uw1, w1v, uw2, w2v = (p.fresh("~g") for _ in range(4))
        spec = self.ag.crossings[e]

        if not spec.crossings:
            pid = p.g_dart(e, u)[0]
            p.add_free_vertex(w1, uw1, p.rs.trace((pid, u)), 0, i)
            face = p.rs.trace((pid, u))
            p.add_g_chord(w1v, face, face.index(p.g_dart(uw1, w1)), 1, i)
            p.add_free_vertex(w2, uw2, p.rs.trace((pid, v)), 1, i)
            face = p.rs.trace((pid, v))
            p.add_g_chord(w2v, face, face.index(p.g_dart(uw2, w2)), 0, i)
            track = None
        else:
            track = spec.crossings[0].track
            nxt = cells[1]
            x = f"@x{e}@{track}"
            p1 = p.g_dart(e, u)[0]
            p2 = p.g_dart(e, v)[0]

            p.add_free_vertex(w1, uw1, p.rs.trace((p1, u)), 0, i)
            x1 = p.fresh("@n")
            p.split_seg(self._seg_in(x, track), x1, PNode(NodeKind.CROSS, g_edge=w1v, track=track))
            face = p.rs.trace((p1, u))
            p.add_piece_chord(w1v, face, face.index(p.g_dart(uw1, w1)), tail_index(face, x1), i)
            face = p.rs.trace((p2, x))
            p.add_piece_chord(w1v, face, len(face) - 1, 1, nxt)
            p.g_dir[w1v] = (w1, v)

            p.add_free_vertex(w2, uw2, p.rs.trace((p1, x)), 1, i)
            x2 = p.fresh("@n")
            p.split_seg(self._seg_out(x, track), x2, PNode(NodeKind.CROSS, g_edge=w2v, track=track))
            face = p.rs.trace((p1, x))
            p.add_piece_chord(w2v, face, face.index(p.g_dart(uw2, w2)), len(face) - 1, i)
            face = p.rs.trace((p2, v))
            p.add_piece_chord(w2v, face, 2, 0, nxt)
            p.g_dir[w2v] = (w2, v)

        p.delete_g_edge(e)
        self.plan.append(RestoreSeparatingEdge(e, u, v, w1, w2, (uw1, w1v, uw2, w2v), track))

    # -- origin -----------------------------------------------------------

    def origin(self, allow_empty: bool = True) -> None:
        """
        Make the origin a vertex joined to one vertex on every ray by an aligned spoke.

        Raises:
            OriginUnsupported: If the origin vertex has a non-aligned edge, or (with
                allow_empty off) the origin is empty and no aligned edge runs through it
        """
        p = self.p
        o = p.origin
        assert o is not None
        new_vertices: List[str] = []
        new_edges: List[str] = []
        if p.is_real(o):
            if any(p.pedges[eid].kind is PEdgeKind.PIECE for eid in p.rs.rot[o]):
                raise OriginUnsupported(f"Origin vertex {o} has a non-aligned edge", witness=o)
        else:
            through = sorted({p.pedges[eid].g_edge for eid in p.rs.rot[o]} - {None})
            if not through and not allow_empty:
                raise OriginUnsupported("The origin is empty and no aligned edge crosses it")
            vid = p.fresh("~o")
            p.promote_origin(vid)
            o = vid
            new_vertices.append(o)
            for e in through:
                for eid in list(p.rs.rot[o]):
                    if p.pedges[eid].g_edge == e:
                        sid = p.fresh("~s")
                        p.set_aligned(eid, sid)
                        new_edges.append(sid)
                p.g_dir.pop(e, None)

        for r in range(self.p.arr.n_tracks):
            seg = self._seg_out(o, r)
            if p.pedges[seg].g_edge is not None:
                continue
            nxt = p.rs.edges[seg][1]
            if not p.is_real(nxt):
                m = p.fresh("~m")
                p.split_seg(seg, m, PNode(NodeKind.REAL))
                seg = p.seg_between(o, m)  # type: ignore[assignment]
                new_vertices.append(m)
            sid = p.fresh("~s")
            p.set_aligned(seg, sid)
            new_edges.append(sid)
        self.plan.append(DropOriginGadget(tuple(new_vertices), tuple(new_edges)))

    # -- outer cycle ------------------------------------------------------

    def outer_cycle(self, standalone: bool = False) -> None:
        """
        Enclose everything in a cycle with one new vertex at the far end of every ray.

        Standalone, each new vertex is also tied to the previous vertex on its ray so
        that the cycle joins the graph.
        """
        p = self.p
        n = p.arr.n_tracks
        cycle: List[str] = []
        edges: List[str] = []
        for r in range(n):
            end = p.end[r]
            seg = self._seg_in(end, r)
            prev = p.rs.edges[seg][0]
            c = p.fresh("~c")
            p.split_seg(seg, c, PNode(NodeKind.REAL))
            cycle.append(c)
            if standalone and p.is_real(prev):
                eid = p.fresh("~k")
                p.set_aligned(p.seg_between(prev, c), eid)  # type: ignore[arg-type]
                edges.append(eid)
        for r in range(n):
            face = p.rs.trace((f"@f{r}", p.end[r]))
            eid = p.fresh("~k")
            a, b = cycle[r], cycle[(r + 1) % n]
            p.add_g_chord(eid, face, tail_index(face, a), tail_index(face, b), r)
            edges.append(eid)
        self.outer = cycle
        self.plan.append(DropOuterCycle(tuple(cycle), tuple(edges)))

    # -- collar -----------------------------------------------------------

    def collar(self) -> None:
        """Subdivide every spoke and join the new vertices around the origin."""
        p = self.p
        o = p.origin
        assert o is not None
        n = p.arr.n_tracks
        ring: List[str] = []
        spokes: List[str] = []
        firsts: List[str] = []
        for r in range(n):
            seg = self._seg_out(o, r)
            old = p.pedges[seg].g_edge
            head = p.rs.edges[seg][1]
            x = p.fresh("~x")
            p.split_seg(seg, x, PNode(NodeKind.REAL))
            first = p.seg_between(o, x)
            second = p.seg_between(x, head)
            sid = p.fresh("~s")
            p.set_aligned(first, sid)  # type: ignore[arg-type]
            p.set_aligned(second, old)  # type: ignore[arg-type]
            ring.append(x)
            spokes.append(sid)
            firsts.append(first)  # type: ignore[arg-type]
        chords: List[str] = []
        for r in range(n):
            face = p.rs.trace((firsts[r], o))
            eid = p.fresh("~y")
            p.add_g_chord(eid, face, 1, len(face) - 1, r)
            chords.append(eid)
        self.plan.append(RemoveGadget(tuple(ring), tuple(spokes + chords), "collar"))

    # -- saturation and triangulation ---------------------------------------

    def saturate(self) -> None:
        """Make every track segment between two consecutive vertices an aligned edge."""
        p = self.p
        added: List[str] = []
        for t in range(p.arr.n_tracks):
            chain = p.track_chain(t)
            for a, b in zip(chain, chain[1:]):
                if not (p.is_real(a) and p.is_real(b)):
                    continue
                seg = p.seg_between(a, b)
                if seg is not None and p.pedges[seg].g_edge is None:
                    eid = p.fresh("~a")
                    p.set_aligned(seg, eid)
                    added.append(eid)
        if added:
            self.plan.append(RemoveGadget((), tuple(added), "saturation"))

    def triangulate(self, skip_empty_origin: bool = False) -> None:
        """
        Triangulate every bounded face of G.

        A face inside one cell whose chords stay free gets a fan; every other face gets
        a ring of new free vertices that is then wired across the tracks it spans.

        Raises:
            CannotTriangulate: On a face shape the construction does not cover
        """
        p = self.p
        faces = p.faces()
        comp, out_comp = p.g_components(faces)
        groups: Dict[int, List[int]] = {}
        for i, c in comp.items():
            groups.setdefault(c, []).append(i)

        gates: List[str] = []
        sides: Dict[Dart, GateSide] = {}
        for c, members in sorted(groups.items()):
            if c == out_comp:
                continue
            darts = [d for i in members for d in faces[i]]
            if sum(1 for d in darts if self._is_g_dart(d)) == 3:
                continue
            tails = {d[1] for d in darts}
            origin = p.origin
            if skip_empty_origin and origin is not None and origin in tails:
                if not p.is_real(origin):
                    continue
            starts = [faces[i][0] for i in members]
            for d in darts:
                pe = p.pedges[d[0]]
                if pe.kind is PEdgeKind.SEG and pe.g_edge is None and p.rs.edges[d[0]][0] == d[1]:
                    gates.append(d[0])
            if len(starts) == 1 and self._try_fan(starts[0]):
                continue
            for start in starts:
                sides.update(self._ring(start))
        for seg in gates:
            self._gate(seg, sides)
        if self._new_edges:
            self.plan.append(
                RemoveGadget(tuple(self._new_vertices), tuple(self._new_edges), "triangulation")
            )
        logger.debug(
            f"triangulation added {len(self._new_vertices)} vertices, {len(self._new_edges)} edges"
        )

    def _chord(self, face: Sequence[Dart], i: int, j: int, cell: int) -> str:
        eid = self.p.fresh("~t")
        self.p.add_g_chord(eid, face, i, j, cell)
        self._new_edges.append(eid)
        return eid

    def _pendant(
        self, face: Sequence[Dart], i: int, cell: int, prefix: str = "~z"
    ) -> Tuple[str, str]:
        vid, eid = self.p.fresh(prefix), self.p.fresh("~t")
        self.p.add_free_vertex(vid, eid, face, i, cell)
        self._new_vertices.append(vid)
        self._new_edges.append(eid)
        return vid, eid

    def _fan(self, start: Dart, cell: int) -> None:
        p = self.p
        apex = start[1]
        face = p.rs.trace(start)
        while len(face) > 3:
            eid = self._chord(face, 0, 2, cell)
            face = p.rs.trace(p.g_dart(eid, apex))

    def _try_fan(self, start: Dart) -> bool:
        p = self.p
        face = p.rs.trace(start)
        tails = [d[1] for d in face]
        n = len(tails)
        if len(set(tails)) != n or not all(p.is_real(v) for v in tails):
            return False
        cell = p.face_cell(face)
        for s in range(n):
            apex = tails[s]
            others = [tails[(s + j) % n] for j in range(2, n - 1)]
            blocked = any(
                p.g_edge_between(apex, w) is not None
                or (self._anchored(apex) and self._anchored(w))
                for w in others
            )
            if not blocked:
                self._fan(face[s], cell)
                return True
        return False

    def _ring(self, start: Dart) -> Dict[Dart, GateSide]:
        p = self.p
        face = p.rs.trace(start)
        cell = p.face_cell(face)
        pos = [i for i, d in enumerate(face) if p.is_real(d[1])]
        n = len(pos)
        if n == 0:
            raise CannotTriangulate("A face has no vertex of the graph", witness=face[0])

        run_of: Dict[Dart, int] = {}
        for j in range(n):
            stop = pos[j + 1] if j + 1 < n else pos[0] + len(face)
            run = [face[q % len(face)] for q in range(pos[j], stop)]
            gates = [
                d
                for d in run
                if p.pedges[d[0]].kind is PEdgeKind.SEG and p.pedges[d[0]].g_edge is None
            ]
            if len(gates) > 1:
                raise CannotTriangulate(
                    "A face runs along two tracks between vertices", witness=run[0]
                )
            for d in gates:
                run_of[d] = j

        if n == 1:
            first = face[pos[0]]
            za, ea = self._pendant(p.rs.trace(first), 0, cell)
            zb, eb = self._pendant(p.rs.trace(first), 0, cell)
            cur = p.rs.trace(first)
            self._chord(cur, cur.index(p.g_dart(ea, za)), cur.index(p.g_dart(eb, zb)), cell)
            return {d: (zb, za) for d in run_of}

        firsts = [face[q] for q in pos]
        if any(firsts[j][1] == firsts[(j + 1) % n][1] for j in range(n)):
            raise CannotTriangulate("A face revisits a vertex", witness=firsts[0][1])

        zs: List[str] = []
        links: List[str] = []
        rings: List[str] = []
        back_to_first: Optional[Dart] = None
        for j in range(n):
            zj, ej = self._pendant(p.rs.trace(firsts[j]), 0, cell)
            if j == 0:
                back_to_first = p.g_dart(ej, firsts[0][1])
            target = firsts[j + 1] if j + 1 < n else back_to_first
            cur = p.rs.trace(firsts[j])
            link = self._chord(cur, cur.index(p.g_dart(ej, zj)), cur.index(target), cell)
            zs.append(zj)
            links.append(link)
            if j >= 1:
                cur = p.rs.trace(p.g_dart(links[j - 1], zs[j - 1]))
                rings.append(self._chord(cur, 0, cur.index(p.g_dart(link, zj)), cell))
        if n >= 3:
            cur = p.rs.trace(p.g_dart(links[-1], zs[-1]))
            self._chord(cur, 0, cur.index(p.g_dart(rings[0], zs[0])), cell)
        if n >= 4:
            _, eh = self._pendant(p.rs.trace(p.g_dart(rings[0], zs[0])), 0, cell, "~h")
            hub = p.g_dir[eh][1]
            self._fan(p.g_dart(eh, hub), cell)
        return {d: (zs[j], zs[j]) for d, j in run_of.items()}

    def _gate(self, seg: str, sides: Dict[Dart, GateSide]) -> None:
        """Cross a track segment between two ringed faces with triangulating edges."""
        p = self.p
        a, b = p.rs.edges[seg]
        fwd, bwd = (seg, a), (seg, b)
        if fwd not in sides or bwd not in sides:
            raise CannotTriangulate(f"Track segment {seg} borders an unprocessed face", witness=seg)

        def loop_side(d: Dart) -> bool:
            return sides[d][0] != sides[d][1]

        f_dart, g_dart = (bwd, fwd) if loop_side(bwd) and not loop_side(fwd) else (fwd, bwd)
        track = p.pedges[seg].track
        f_cell = p.dart_cell(f_dart)
        g_cell = p.dart_cell(g_dart)
        start, end = f_dart[1], p.rs.head(f_dart)
        z_start, z_end = sides[f_dart]
        g_near_end, g_near_start = sides[g_dart]
        z_far = [g_near_start, g_near_end] if g_near_start != g_near_end else [g_near_start]

        g_face = p.rs.trace(g_dart)
        after = next(d[1] for d in g_face[1:] if p.is_real(d[1]))
        before = next(d[1] for d in [g_face[0]] + g_face[:0:-1] if p.is_real(d[1]))

        wiring: List[Tuple[str, str]] = []
        if not p.is_real(start):
            wiring.append((z_start, after))
        wiring.append((z_start, z_far[0]))
        if len(z_far) == 2:
            wiring.append((z_start, z_far[1]))
        if z_end != z_start:
            wiring.append((z_end, z_far[-1]))
        if not p.is_real(end):
            wiring.append((z_end, before))

        rest, prev = seg, start
        for z, t in wiring:
            geid = p.fresh("~t")
            nid = p.fresh("@n")
            p.split_seg(rest, nid, PNode(NodeKind.CROSS, g_edge=geid, track=track))
            toward = p.seg_between(nid, end)
            back = p.seg_between(nid, prev)
            face = p.rs.trace((toward, nid))  # type: ignore[arg-type]
            p.add_piece_chord(geid, face, tail_index(face, z), 0, f_cell)
            face = p.rs.trace((back, nid))  # type: ignore[arg-type]
            p.add_piece_chord(geid, face, 0, tail_index(face, t, 1), g_cell)
            p.g_dir[geid] = (z, t)
            self._new_edges.append(geid)
            rest, prev = toward, nid  # type: ignore[assignment]
