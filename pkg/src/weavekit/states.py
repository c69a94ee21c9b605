"""Crossing smoothings, state resolution, and the state-space tracer.

Splitting a crossing replaces it by two non-crossing arcs. Relative to a
frame whose over-strand occupies the slot 1-3 axis, the A-split joins
slots (0,1) and (2,3); the B-split joins (1,2) and (3,0). Frames with the
over-strand on the 0-2 axis are one counterclockwise step away, so their
tables rotate accordingly.

Two independent code paths produce resolved states: a surgery that builds
the smoothed diagram edge by edge (used by the recursive bracket oracle),
and a flat dart tracer used by the state-sum bracket. Tests hold them to
identical answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from . import words
from .diagram import (
    AXIS_02,
    AXIS_13,
    Crossing,
    DiagramError,
    Edge,
    End,
    SurfaceDiagram,
)

Pairing = tuple[tuple[int, int], tuple[int, int]]

# slot pairings for each split kind, indexed by the crossing's over_axis
A_PAIRING: dict[int, Pairing] = {
    AXIS_13: ((0, 1), (2, 3)),
    AXIS_02: ((1, 2), (3, 0)),
}
B_PAIRING: dict[int, Pairing] = {
    AXIS_13: ((1, 2), (3, 0)),
    AXIS_02: ((0, 1), (2, 3)),
}
# strands pass each other without crossing; used by move surgery only
PASS_PAIRING: Pairing = ((0, 2), (1, 3))


def split_pairing(crossing: Crossing, kind: str) -> Pairing:
    if kind == "A":
        return A_PAIRING[crossing.over_axis]
    if kind == "B":
        return B_PAIRING[crossing.over_axis]
    raise ValueError(f"split kind must be 'A' or 'B', got {kind!r}")


def smooth_crossings(
    d: SurfaceDiagram, pairings: Mapping[int, Pairing]
) -> SurfaceDiagram:
    """Remove the given crossings, reconnecting strands per slot pairing.

    Edge words concatenate along the reconnected chains; chains that close
    without meeting a surviving crossing become free loops.
    """
    for cid in pairings:
        if not 0 <= cid < len(d.crossings):
            raise DiagramError(f"unknown crossing c{cid}")
    end_map = d.end_map()
    partner: dict[End, End] = {}
    for cid, pairing in pairings.items():
        for a, b in pairing:
            partner[(cid, a)] = (cid, b)
            partner[(cid, b)] = (cid, a)

    survivors = [c for c in d.crossings if c.id not in pairings]
    new_id = {c.id: i for i, c in enumerate(survivors)}

    visited_dart_dirs: set[tuple[int, int]] = set()  # (edge id, direction taken)

    def walk(start: End) -> tuple[End, words.Word, list[tuple[int, int]]]:
        """Follow the strand from a surviving dart until the next surviving dart."""
        acc: list[int] = []
        used: list[tuple[int, int]] = []
        pos = start
        while True:
            eid, which = end_map[pos]
            e = d.edges[eid]
            direction = 0 if which == 0 else 1
            used.append((eid, direction))
            acc.extend(e.directed_word(direction))
            nxt = e.ends[1 - which]
            if nxt[0] not in pairings:
                return nxt, words.free_reduce(acc), used
            pos = partner[nxt]

    new_edges: list[tuple[End, End, words.Word]] = []
    consumed: set[End] = set()
    for c in survivors:
        for s in range(4):
            start = (c.id, s)
            if start in consumed:
                continue
            stop, word, used = walk(start)
            consumed.add(start)
            consumed.add(stop)
            for pair_step in used:
                visited_dart_dirs.add(pair_step)
                visited_dart_dirs.add((pair_step[0], 1 - pair_step[1]))
            new_edges.append(
                ((new_id[start[0]], start[1]), (new_id[stop[0]], stop[1]), word)
            )

    # chains living entirely on smoothed crossings close into free loops
    new_loops: list[words.Word] = list(d.loops)
    for e in d.edges:
        if (e.id, 0) in visited_dart_dirs:
            continue
        acc: list[int] = []
        eid, direction = e.id, 0
        while (eid, direction) not in visited_dart_dirs:
            visited_dart_dirs.add((eid, direction))
            visited_dart_dirs.add((eid, 1 - direction))
            ee = d.edges[eid]
            acc.extend(ee.directed_word(direction))
            nxt = ee.ends[1] if direction == 0 else ee.ends[0]
            hop = partner[nxt]
            eid2, which = end_map[hop]
            eid, direction = eid2, 0 if which == 0 else 1
        new_loops.append(words.free_reduce(acc))

    crossings = [Crossing(i, c.over_axis) for i, c in enumerate(survivors)]
    edges = [Edge(i, (a, b), w) for i, (a, b, w) in enumerate(new_edges)]
    return SurfaceDiagram(d.genus, crossings, edges, new_loops)


def split(d: SurfaceDiagram, cid: int, kind: str) -> SurfaceDiagram:
    """Planar smoothing of one crossing; 'A' or 'B' relative to its frame."""
    if not 0 <= cid < len(d.crossings):
        raise DiagramError(f"unknown crossing c{cid}")
    return smooth_crossings(d, {cid: split_pairing(d.crossings[cid], kind)})


def normalize_class(vec: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Winding class of a loop: sign-normalized, None when null-homologous."""
    for v in vec:
        if v:
            return tuple(vec) if v > 0 else tuple(-x for x in vec)
    return None


WindingKey = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class State:
    """A total split assignment together with its resolved loop census."""

    assignment: tuple[str, ...]          # 'A' or 'B' per crossing id
    trivial_loops: int                   # null-homologous loop count c_S
    winding: WindingKey                  # sorted multiset of winding classes

    @property
    def a_count(self) -> int:
        return sum(1 for k in self.assignment if k == "A")

    @property
    def b_count(self) -> int:
        return sum(1 for k in self.assignment if k == "B")


class StateTracer:
    """Flat-array loop tracer over the 2^C split assignments of a diagram.

    Darts are numbered 4*crossing + slot. ``alpha`` jumps across an edge,
    a per-state pairing jumps across a smoothed crossing, and cycles of
    their composition are the directed state loops; direction pairs are
    collapsed by marking a cycle's partner darts as visited.
    """

    def __init__(self, d: SurfaceDiagram):
        d._check_closed()
        self.diagram = d
        self.genus = d.genus
        C = len(d.crossings)
        self.n_crossings = C
        self.n_darts = 4 * C
        self.alpha = [0] * self.n_darts
        self.wvec: list[tuple[int, ...]] = [()] * self.n_darts
        for e in d.edges:
            (c0, s0), (c1, s1) = e.ends
            d0, d1 = 4 * c0 + s0, 4 * c1 + s1
            self.alpha[d0] = d1
            self.alpha[d1] = d0
            vec = words.abelianize(e.word, d.genus)
            self.wvec[d0] = vec
            self.wvec[d1] = tuple(-v for v in vec)
        self.pair_a = [0] * self.n_darts
        self.pair_b = [0] * self.n_darts
        for c in d.crossings:
            for x, y in A_PAIRING[c.over_axis]:
                self.pair_a[4 * c.id + x] = 4 * c.id + y
                self.pair_a[4 * c.id + y] = 4 * c.id + x
            for x, y in B_PAIRING[c.over_axis]:
                self.pair_b[4 * c.id + x] = 4 * c.id + y
                self.pair_b[4 * c.id + y] = 4 * c.id + x
        self.base_trivial = 0
        base_winding: list[tuple[int, ...]] = []
        for w in d.loops:
            cls = normalize_class(words.abelianize(w, d.genus))
            if cls is None:
                self.base_trivial += 1
            else:
                base_winding.append(cls)
        self.base_winding = tuple(base_winding)

    def resolve_bits(self, bits: int, pair: Optional[list[int]] = None) -> tuple[int, WindingKey]:
        """Loop census for the state whose crossing c is B-split iff bit c set."""
        if pair is None:
            pair = self.pairing_for_bits(bits)
        alpha = self.alpha
        wvec = self.wvec
        dim = 2 * self.genus
        visited = bytearray(self.n_darts)
        trivial = self.base_trivial
        winding = list(self.base_winding)
        for start in range(self.n_darts):
            if visited[start]:
                continue
            acc = [0] * dim
            dart = start
            while not visited[dart]:
                visited[dart] = 1
                mate = pair[dart]
                visited[mate] = 1
                vec = wvec[mate]
                for i in range(dim):
                    acc[i] += vec[i]
                dart = alpha[mate]
            cls = normalize_class(acc)
            if cls is None:
                trivial += 1
            else:
                winding.append(cls)
        winding.sort()
        return trivial, tuple(winding)

    def pairing_for_bits(self, bits: int) -> list[int]:
        pair = list(self.pair_a)
        for c in range(self.n_crossings):
            if bits >> c & 1:
                base = 4 * c
                for s in range(4):
                    pair[base + s] = self.pair_b[base + s]
        return pair

    def set_crossing(self, pair: list[int], cid: int, to_b: bool) -> None:
        src = self.pair_b if to_b else self.pair_a
        base = 4 * cid
        for s in range(4):
            pair[base + s] = src[base + s]


def resolve_state(d: SurfaceDiagram, assignment: Iterable[str]) -> State:
    """Split every crossing and classify the resulting closed curves."""
    kinds = tuple(assignment)
    if len(kinds) != len(d.crossings):
        raise DiagramError("assignment length must equal the crossing count")
    for k in kinds:
        if k not in ("A", "B"):
            raise DiagramError("assignment entries must be 'A' or 'B'")
    tracer = StateTracer(d)
    bits = 0
    for cid, k in enumerate(kinds):
        if k == "B":
            bits |= 1 << cid
    trivial, winding = tracer.resolve_bits(bits)
    return State(kinds, trivial, winding)


def resolve_to_diagram(d: SurfaceDiagram, assignment: Iterable[str]) -> SurfaceDiagram:
    """Smooth every crossing, producing the crossing-free diagram."""
    kinds = tuple(assignment)
    if len(kinds) != len(d.crossings):
        raise DiagramError("assignment length must equal the crossing count")
    pairings = {
        c.id: split_pairing(c, kinds[c.id]) for c in d.crossings
    }
    return smooth_crossings(d, pairings)
