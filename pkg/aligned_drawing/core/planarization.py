"""
Planarization of an aligned graph.

The planarization P overlays the graph G on its arrangement: every crossing of an edge
with a track becomes a node, tracks become chains of segment edges, and a frame closes
the tracks off at infinity. P is a plane multigraph whose faces each lie in one cell,
which makes it the workhorse for validating annotations and for the face-local edits
of the star pipeline.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import count
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from aligned_drawing.core.planar import RotationSystem
from aligned_drawing.exceptions import EmbeddingError, InconsistentAnnotation
from aligned_drawing.models.aligned import AlignedGraph, Arrangement, Item
from aligned_drawing.models.embedding import Dart

OUT = -1


class NodeKind(Enum):
    REAL = "real"
    CROSS = "cross"
    ORIGIN_DUMMY = "origin_dummy"
    END = "end"


class PEdgeKind(Enum):
    PIECE = "piece"
    SEG = "seg"
    FRAME = "frame"


@dataclass
class PNode:
    kind: NodeKind
    g_edge: Optional[str] = None
    track: Optional[int] = None


@dataclass
class PEdge:
    """
    An edge of the planarization.

    PIECE: part of G edge g_edge inside cell. SEG: piece of track, oriented outward or
    rightward, carrying g_edge when it is (part of) an aligned edge. FRAME: closing edge
    oriented counterclockwise with the given interior cell.
    """

    kind: PEdgeKind
    g_edge: Optional[str] = None
    cell: Optional[int] = None
    track: Optional[int] = None


class Planarization:
    """Mutable planarization of an aligned graph."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.rs = RotationSystem()
        self.nodes: Dict[str, PNode] = {}
        self.pedges: Dict[str, PEdge] = {}
        self.g_dir: Dict[str, Tuple[str, str]] = {}
        self._ids = count()
        self.origin: Optional[str] = None
        self.start: Dict[int, str] = {}
        self.end: Dict[int, str] = {}

    # -- ids --------------------------------------------------------------

    def fresh(self, prefix: str) -> str:
        while True:
            candidate = f"{prefix}{next(self._ids)}"
            taken = candidate in self.nodes or candidate in self.pedges or candidate in self.g_dir
            if not taken:
                return candidate

    def _add_node(self, nid: str, node: PNode) -> None:
        self.rs.add_vertex(nid)
        self.nodes[nid] = node

    def _add_edge(self, eid: str, a: str, b: str, pedge: PEdge) -> None:
        self.rs.edges[eid] = (a, b)
        self.pedges[eid] = pedge

    # -- construction -----------------------------------------------------

    @classmethod
    def from_aligned(cls, ag: AlignedGraph) -> "Planarization":
        """Build P from a structurally checked aligned graph with anchored rotations."""
        p = cls(ag.arr)
        arr = ag.arr
        g = ag.graph
        for v in g.vertices:
            p._add_node(v, PNode(NodeKind.REAL))
        p.g_dir = {e: tuple(ends) for e, ends in g.edges.items()}  # type: ignore[misc]

        origin_v = ag.origin_vertex()
        if arr.is_star:
            if origin_v is None:
                origin_v = "@origin"
                p._add_node(origin_v, PNode(NodeKind.ORIGIN_DUMMY))
            p.origin = origin_v
            for r in range(arr.n_tracks):
                end = f"@end{r}"
                p._add_node(end, PNode(NodeKind.END, track=r))
                p.start[r] = origin_v
                p.end[r] = end
        else:
            for layer in range(arr.n_tracks):
                left, right = f"@L{layer}", f"@R{layer}"
                p._add_node(left, PNode(NodeKind.END, track=layer))
                p._add_node(right, PNode(NodeKind.END, track=layer))
                p.start[layer] = left
                p.end[layer] = right

        for e, spec in ag.crossings.items():
            for c in spec.crossings:
                p._add_node(f"@x{e}@{c.track}", PNode(NodeKind.CROSS, g_edge=e, track=c.track))

        # segment chains
        seg_out: Dict[Tuple[str, int], str] = {}
        seg_in: Dict[Tuple[str, int], str] = {}
        for t in range(arr.n_tracks):
            chain = [p.start[t]] + [_item_node(it, t) for it in ag.orders.get(t, ())] + [p.end[t]]
            for a, b in zip(chain, chain[1:]):
                sid = p.fresh("@s")
                seg = PEdge(PEdgeKind.SEG, g_edge=_aligned_between(ag, a, b), track=t)
                p._add_edge(sid, a, b, seg)
                seg_out[(a, t)] = sid
                seg_in[(b, t)] = sid

        # pieces
        first_piece: Dict[str, str] = {}
        last_piece: Dict[str, str] = {}
        cross_in: Dict[str, str] = {}
        cross_out: Dict[str, str] = {}
        for e, (tail, head) in g.edges.items():
            spec = ag.crossings[e]
            if spec.aligned:
                continue
            chain = [tail] + [f"@x{e}@{c.track}" for c in spec.crossings] + [head]
            cells = ag.cells[e]
            for j, (a, b) in enumerate(zip(chain, chain[1:])):
                pid = p.fresh("@p")
                p._add_edge(pid, a, b, PEdge(PEdgeKind.PIECE, g_edge=e, cell=cells[j]))
                if j == 0:
                    first_piece[e] = pid
                else:
                    cross_out[a] = pid
                if j == len(chain) - 2:
                    last_piece[e] = pid
                else:
                    cross_in[b] = pid

        def piece_at(e: str, v: str) -> str:
            return first_piece[e] if g.edges[e][0] == v else last_piece[e]

        # rotations
        for v in g.vertices:
            pl = ag.placement[v]
            if pl.is_free:
                p.rs.rot[v] = [piece_at(e, v) for e in g.rotation[v]]
            elif pl.is_origin:
                rot: List[str] = []
                blocks: Dict[int, List[str]] = {c: [] for c in range(arr.n_cells)}
                for e in g.rotation[v]:
                    if not ag.crossings[e].aligned:
                        blocks[ag.end_cell(e, v)].append(piece_at(e, v))  # type: ignore[index]
                for r in range(arr.n_tracks):
                    rot.append(seg_out[(v, r)])
                    rot.extend(blocks[r])
                p.rs.rot[v] = rot
            else:
                t = pl.index
                left_block, right_block = [], []
                for e in g.rotation[v]:
                    if ag.crossings[e].aligned:
                        continue
                    if ag.end_cell(e, v) == arr.left_cell(t):  # type: ignore[arg-type]
                        left_block.append(piece_at(e, v))
                    else:
                        right_block.append(piece_at(e, v))
                out_seg, in_seg = seg_out[(v, t)], seg_in[(v, t)]  # type: ignore[index]
                p.rs.rot[v] = [out_seg] + left_block + [in_seg] + right_block

        for nid, node in p.nodes.items():
            if node.kind is NodeKind.CROSS:
                t = node.track
                s_out, s_in = seg_out[(nid, t)], seg_in[(nid, t)]  # type: ignore[index]
                pin, pout = cross_in[nid], cross_out[nid]
                if p.pedges[pin].cell == arr.right_cell(t):  # type: ignore[arg-type]
                    p.rs.rot[nid] = [s_out, pout, s_in, pin]
                else:
                    p.rs.rot[nid] = [s_out, pin, s_in, pout]
            elif node.kind is NodeKind.ORIGIN_DUMMY:
                p.rs.rot[nid] = [seg_out[(nid, r)] for r in range(arr.n_tracks)]

        p._add_frame(seg_in, seg_out)
        return p

    def _add_frame(self, seg_in: Dict[Tuple[str, int], str], seg_out: Dict[Tuple[str, int], str]):
        arr = self.arr
        n = arr.n_tracks
        if arr.is_star:
            frames = []
            for r in range(n):
                fid = f"@f{r}"
                frame = PEdge(PEdgeKind.FRAME, cell=r)
                self._add_edge(fid, self.end[r], self.end[(r + 1) % n], frame)
                frames.append(fid)
            for r in range(n):
                self.rs.rot[self.end[r]] = [frames[r], seg_in[(self.end[r], r)], frames[r - 1]]
            # backward frame darts border the unbounded region
            self.rs.outer = (frames[0], self.end[1])
            return

        m = n
        up_r: Dict[int, str] = {}
        down_r: Dict[int, str] = {}
        up_l: Dict[int, str] = {}
        down_l: Dict[int, str] = {}
        for layer in range(m - 1):
            fid = f"@fr{layer}"
            frame = PEdge(PEdgeKind.FRAME, cell=layer + 1)
            self._add_edge(fid, self.end[layer], self.end[layer + 1], frame)
            up_r[layer] = fid
            down_r[layer + 1] = fid
            fid = f"@fl{layer}"
            frame = PEdge(PEdgeKind.FRAME, cell=layer + 1)
            self._add_edge(fid, self.start[layer + 1], self.start[layer], frame)
            up_l[layer] = fid
            down_l[layer + 1] = fid
        self._add_edge("@ftop", self.end[m - 1], self.start[m - 1], PEdge(PEdgeKind.FRAME, cell=m))
        up_r[m - 1] = "@ftop"
        up_l[m - 1] = "@ftop"
        self._add_edge("@fbot", self.start[0], self.end[0], PEdge(PEdgeKind.FRAME, cell=0))
        down_r[0] = "@fbot"
        down_l[0] = "@fbot"
        for layer in range(m):
            self.rs.rot[self.end[layer]] = [
                up_r[layer],
                seg_in[(self.end[layer], layer)],
                down_r[layer],
            ]
            self.rs.rot[self.start[layer]] = [
                seg_out[(self.start[layer], layer)],
                up_l[layer],
                down_l[layer],
            ]
        self.rs.outer = ("@fbot", self.end[0])

    # -- queries ----------------------------------------------------------

    def faces(self) -> List[List[Dart]]:
        return self.rs.faces()

    def dart_cell(self, dart: Dart) -> int:
        """Cell of the face to the left of a dart, as implied by the dart's edge alone."""
        eid, tail = dart
        pe = self.pedges[eid]
        forward = self.rs.edges[eid][0] == tail
        if pe.kind is PEdgeKind.PIECE:
            return pe.cell  # type: ignore[return-value]
        if pe.kind is PEdgeKind.SEG:
            t = pe.track
            side = self.arr.left_cell if forward else self.arr.right_cell
            return side(t)  # type: ignore[arg-type]
        return pe.cell if forward else OUT  # type: ignore[return-value]

    def face_cell(self, face: Sequence[Dart]) -> int:
        cells = {self.dart_cell(d) for d in face}
        if len(cells) != 1:
            raise InconsistentAnnotation(
                f"A face of the planarization touches cells {sorted(cells)}", witness=face[0]
            )
        return cells.pop()

    def g_components(self, faces: List[List[Dart]]) -> Tuple[Dict[int, int], int]:
        """Union P faces across edges that are not part of G. Returns (face -> comp, OUT comp)."""
        index = {d: i for i, f in enumerate(faces) for d in f}
        dsu = nx.utils.UnionFind(range(len(faces)))
        out_face = None
        for i, f in enumerate(faces):
            if any(self.dart_cell(d) == OUT for d in f):
                out_face = i
        for eid, pe in self.pedges.items():
            if pe.kind is PEdgeKind.FRAME or (pe.kind is PEdgeKind.SEG and pe.g_edge is None):
                a, b = self.rs.edges[eid]
                dsu.union(index[(eid, a)], index[(eid, b)])
        comp = {i: dsu[i] for i in range(len(faces))}
        return comp, comp[out_face]  # type: ignore[index]

    def g_dart(self, geid: str, v: str) -> Dart:
        """P dart leaving v along G edge geid."""
        for eid in self.rs.rot[v]:
            if self.pedges[eid].g_edge == geid and self.pedges[eid].kind is not PEdgeKind.FRAME:
                return (eid, v)
        raise InconsistentAnnotation(f"Edge {geid} is not incident to {v}", witness=geid)

    def validate(self, g_faces: int, g_outer: Optional[Dart]) -> None:
        """
        Check that P is plane, each face lies in one cell, and the G faces match.

        Raises:
            InconsistentAnnotation: On the first failed check
        """
        try:
            self.rs.freeze(allow_multi=True)
        except EmbeddingError as e:
            raise InconsistentAnnotation(f"Annotation is not realizable in the plane: {e}") from e
        faces = self.faces()
        for f in faces:
            self.face_cell(f)
        comp, out_comp = self.g_components(faces)
        n_comp = len(set(comp.values()))
        if n_comp != g_faces:
            raise InconsistentAnnotation(
                f"Planarization has {n_comp} graph regions but the embedding has {g_faces} faces"
            )
        if g_outer is not None:
            index = {d: i for i, f in enumerate(faces) for d in f}
            pd = self.g_dart(g_outer[0], g_outer[1])
            if comp[index[pd]] != out_comp:
                raise InconsistentAnnotation(
                    f"Outer dart {g_outer} does not border the unbounded region", witness=g_outer
                )

    def track_chain(self, t: int) -> List[str]:
        """Nodes along track t from its start (origin or left end) to its far end."""
        chain = [self.start[t]]
        cur = self.start[t]
        while cur != self.end[t]:
            nxt = None
            for eid in self.rs.rot[cur]:
                pe = self.pedges[eid]
                if pe.kind is PEdgeKind.SEG and pe.track == t and self.rs.edges[eid][0] == cur:
                    nxt = self.rs.edges[eid][1]
                    break
            if nxt is None:
                raise InconsistentAnnotation(f"Track {t} is broken at {cur}", witness=cur)
            chain.append(nxt)
            cur = nxt
        return chain

    def seg_between(self, a: str, b: str) -> Optional[str]:
        for eid in self.rs.rot[a]:
            pe = self.pedges[eid]
            if pe.kind is PEdgeKind.SEG and set(self.rs.edges[eid]) == {a, b}:
                return eid
        return None

    def track_of(self, nid: str) -> Optional[int]:
        """Track of a node lying on exactly one track (None for the origin and free nodes)."""
        if nid == self.origin:
            return None
        node = self.nodes[nid]
        if node.kind in (NodeKind.CROSS, NodeKind.END):
            return node.track
        for eid in self.rs.rot[nid]:
            pe = self.pedges[eid]
            if pe.kind is PEdgeKind.SEG:
                return pe.track
        return None

    def is_real(self, nid: str) -> bool:
        return self.nodes[nid].kind is NodeKind.REAL

    def real_neighbors(self, v: str) -> Set[str]:
        """G-neighbours of a real node."""
        result = set()
        for geid, (a, b) in self.g_dir.items():
            if a == v:
                result.add(b)
            elif b == v:
                result.add(a)
        return result

    def g_edge_between(self, u: str, v: str) -> Optional[str]:
        for geid, ends in self.g_dir.items():
            if set(ends) == {u, v}:
                return geid
        return None

    # -- editing ----------------------------------------------------------

    def add_g_chord(
        self, geid: str, face: Sequence[Dart], i: int, j: int, cell: int
    ) -> None:
        """Add an uncrossed G edge as one piece from face[i]'s tail to face[j]'s tail."""
        pid = self.fresh("@p")
        self.rs.insert_chord(pid, face, i, j)
        self.pedges[pid] = PEdge(PEdgeKind.PIECE, g_edge=geid, cell=cell)
        self.g_dir[geid] = (face[i][1], face[j][1])

    def add_piece_chord(
        self, geid: str, face: Sequence[Dart], i: int, j: int, cell: int
    ) -> str:
        """Add one piece of a (possibly crossed) G edge; g_dir is maintained by the caller."""
        pid = self.fresh("@p")
        self.rs.insert_chord(pid, face, i, j)
        self.pedges[pid] = PEdge(PEdgeKind.PIECE, g_edge=geid, cell=cell)
        return pid

    def add_free_vertex(self, vid: str, geid: str, face: Sequence[Dart], i: int, cell: int) -> None:
        """New real vertex inside a face joined by a G edge from face[i]'s tail."""
        pid = self.fresh("@p")
        self.rs.add_pendant(pid, vid, face, i)
        self.nodes[vid] = PNode(NodeKind.REAL)
        self.pedges[pid] = PEdge(PEdgeKind.PIECE, g_edge=geid, cell=cell)
        self.g_dir[geid] = (face[i][1], vid)

    def split_seg(self, seg: str, nid: str, node: PNode) -> None:
        """Put a new node in the middle of a track segment."""
        pe = self.pedges[seg]
        first, second = self.fresh("@s"), self.fresh("@s")
        self.rs.subdivide(seg, nid, first, second)
        del self.pedges[seg]
        self.nodes[nid] = node
        self.pedges[first] = PEdge(PEdgeKind.SEG, g_edge=pe.g_edge, track=pe.track)
        self.pedges[second] = PEdge(PEdgeKind.SEG, g_edge=pe.g_edge, track=pe.track)
        # subdivide leaves [second, first]; a track node wants [out, in]
        self.rs.rot[nid] = [second, first]

    def promote_origin(self, vid: str) -> None:
        """Turn the empty origin into a real vertex named vid."""
        old = self.origin
        if old is None or self.nodes[old].kind is not NodeKind.ORIGIN_DUMMY:
            raise InconsistentAnnotation("The origin is already a vertex", witness=old)
        if vid != old:
            self.rs.vertices[self.rs.vertices.index(old)] = vid
            self.rs.rot[vid] = self.rs.rot.pop(old)
            for eid, (a, b) in list(self.rs.edges.items()):
                if old in (a, b):
                    self.rs.edges[eid] = (vid if a == old else a, vid if b == old else b)
            del self.nodes[old]
            for t, s in self.start.items():
                if s == old:
                    self.start[t] = vid
        self.nodes[vid] = PNode(NodeKind.REAL)
        self.origin = vid

    def set_aligned(self, seg: str, geid: Optional[str]) -> None:
        self.pedges[seg].g_edge = geid
        if geid is not None:
            self.g_dir[geid] = self.rs.edges[seg]

    def _merge_segs(self, nid: str) -> None:
        """Remove a degree-2 track node, joining its two segments."""
        s_out, s_in = self.rs.rot[nid]
        a = self.rs.edges[s_in][0]
        b = self.rs.edges[s_out][1]
        track = self.pedges[s_in].track
        merged = self.fresh("@s")
        ra, rb = self.rs.rot[a], self.rs.rot[b]
        ra[ra.index(s_in)] = merged
        rb[rb.index(s_out)] = merged
        for s in (s_in, s_out):
            del self.rs.edges[s]
            del self.pedges[s]
        self.rs.edges[merged] = (a, b)
        self.pedges[merged] = PEdge(PEdgeKind.SEG, g_edge=None, track=track)
        del self.rs.rot[nid]
        self.rs.vertices.remove(nid)
        del self.nodes[nid]

    def delete_g_edge(self, geid: str) -> None:
        """Remove a G edge with its crossing nodes."""
        mine = {e: pe for e, pe in self.pedges.items() if pe.g_edge == geid}
        for pe in mine.values():
            if pe.kind is PEdgeKind.SEG:
                pe.g_edge = None
        pieces = [e for e, pe in mine.items() if pe.kind is PEdgeKind.PIECE]
        crosses = [
            n
            for n, node in self.nodes.items()
            if node.kind is NodeKind.CROSS and node.g_edge == geid
        ]
        for pid in pieces:
            a, b = self.rs.edges.pop(pid)
            self.rs.rot[a].remove(pid)
            self.rs.rot[b].remove(pid)
            del self.pedges[pid]
        for x in crosses:
            self._merge_segs(x)
        self.g_dir.pop(geid, None)

    def delete_real_vertex(self, vid: str) -> None:
        """Remove a real vertex and its G edges."""
        for geid in [e for e, ends in self.g_dir.items() if vid in ends]:
            self.delete_g_edge(geid)
        if vid == self.origin:
            self.nodes[vid] = PNode(NodeKind.ORIGIN_DUMMY)
            return
        if self.rs.rot[vid]:
            self._merge_segs(vid)
        else:
            del self.rs.rot[vid]
            self.rs.vertices.remove(vid)
            del self.nodes[vid]

    # -- back to an aligned graph -----------------------------------------

    def to_aligned(self) -> AlignedGraph:
        """Read the aligned graph off P and validate it with build_aligned."""
        from aligned_drawing.core.aligned_model import build_aligned
        from aligned_drawing.core.planar import build_embedding
        from aligned_drawing.models.aligned import Crossing, CrossingSpec, Placement

        arr = self.arr
        placement: Dict[str, Placement] = {}
        orders: Dict[int, Tuple[Item, ...]] = {}
        for t in range(arr.n_tracks):
            items: List[Item] = []
            for nid in self.track_chain(t)[1:-1]:
                node = self.nodes[nid]
                if node.kind is NodeKind.REAL:
                    items.append(("v", nid))
                    placement[nid] = Placement.on_ray(t) if arr.is_star else Placement.on_layer(t)
                elif node.kind is NodeKind.CROSS:
                    items.append(("x", node.g_edge))  # type: ignore[arg-type]
            orders[t] = tuple(items)

        reals = [v for v in self.rs.vertices if self.nodes[v].kind is NodeKind.REAL]
        for v in reals:
            if v in placement:
                continue
            if v == self.origin:
                placement[v] = Placement.origin()
                continue
            touching = (self.pedges[e] for e in self.rs.rot[v])
            cells = {pe.cell for pe in touching if pe.kind is PEdgeKind.PIECE}
            if len(cells) != 1:
                found = sorted(cells)  # type: ignore[type-var]
                raise InconsistentAnnotation(f"Vertex {v} touches cells {found}", witness=v)
            placement[v] = Placement.in_cell(cells.pop())  # type: ignore[arg-type]

        crossings: Dict[str, CrossingSpec] = {}
        for geid, (tail, head) in self.g_dir.items():
            aligned = any(
                pe.kind is PEdgeKind.SEG and pe.g_edge == geid for pe in self.pedges.values()
            )
            if aligned:
                crossings[geid] = CrossingSpec(aligned=True)
                continue
            seq: List[Crossing] = []
            side = None
            cur = tail
            prev_edge = None
            while cur != head:
                nxt_edge = None
                for eid in self.rs.rot[cur]:
                    pe = self.pedges[eid]
                    if pe.kind is PEdgeKind.PIECE and pe.g_edge == geid and eid != prev_edge:
                        nxt_edge = eid
                        break
                if nxt_edge is None:
                    raise InconsistentAnnotation(f"Edge {geid} is broken at {cur}", witness=geid)
                if side is None:
                    side = self.pedges[nxt_edge].cell
                cur = self.rs.other_end(nxt_edge, cur)
                prev_edge = nxt_edge
                if cur != head:
                    seq.append(Crossing(self.nodes[cur].track))  # type: ignore[arg-type]
            crossings[geid] = CrossingSpec(tuple(seq), False, None if seq else side)

        rotation: Dict[str, List[str]] = {}
        for v in reals:
            rot: List[str] = []
            for eid in self.rs.rot[v]:
                pe = self.pedges[eid]
                if pe.kind is PEdgeKind.FRAME or pe.g_edge is None:
                    continue
                if pe.g_edge not in rot:
                    rot.append(pe.g_edge)
            rotation[v] = rot

        faces = self.faces()
        comp, out_comp = self.g_components(faces)
        index = {d: i for i, f in enumerate(faces) for d in f}
        outer: Optional[Dart] = None
        for geid, (tail, head) in sorted(self.g_dir.items()):
            for v in (tail, head):
                if comp[index[self.g_dart(geid, v)]] == out_comp:
                    outer = (geid, v)
                    break
            if outer is not None:
                break

        graph = build_embedding(reals, rotation, dict(self.g_dir), outer)
        return build_aligned(graph, arr, placement, crossings, orders)


def _item_node(item: Item, track: int) -> str:
    kind, ref = item
    return ref if kind == "v" else f"@x{ref}@{track}"


def _aligned_between(ag: AlignedGraph, a: str, b: str) -> Optional[str]:
    """Aligned G edge realized by the track segment from a to b, if any."""
    g = ag.graph
    if a in g.rotation and b in g.rotation:
        e = g.edge_between(a, b)
        if e is not None and ag.crossings[e].aligned:
            return e
    # an aligned edge through an empty origin covers both of its innermost segments
    if a == "@origin" and b in g.rotation:
        k = ag.arr.size
        opposite = (ag.placement[b].index + k) % (2 * k)  # type: ignore[operator]
        for e in g.rotation[b]:
            if not ag.crossings[e].aligned:
                continue
            w = g.other_end(e, b)
            if ag.placement[w].index == opposite and ag.orders[opposite][0] == ("v", w):
                return e
    return None
