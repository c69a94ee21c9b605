"""Combinatorial diagrams of periodic weaves on a genus-g surface cell.

A diagram is a 4-valent graph drawn on the closed orientable surface built
from a 4g-gon with identified sides. Each crossing has four attachment
slots in counterclockwise order (0..3); opposite slots carry one strand
straight through, and ``over_axis`` records which strand is on top. Each
edge remembers the identified cell sides it crosses as a boundary word,
read while traversing from endpoint 0 to endpoint 1. Closed curves that
meet no crossing are kept separately as free loops.

Faces are traced with the fixed corner rule "arrive at a slot, leave by
the next slot counterclockwise"; every derived quantity (regions,
checkerboard colors, isthmus detection) uses that same rule so region
identity is consistent across modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from . import words
from .words import Word

AXIS_02 = 0
AXIS_13 = 1

CrossingId = int
EdgeId = int
FaceId = int
ThreadId = int

End = tuple[CrossingId, int]  # (crossing id, slot 0..3)


class DiagramError(ValueError):
    """Raised for structurally invalid diagrams or queries."""


class ZeroHomologyThread(DiagramError):
    """A component expected to wrap the cell is null-homologous."""


@dataclass(frozen=True)
class Crossing:
    id: CrossingId
    over_axis: int  # AXIS_02 or AXIS_13

    def __post_init__(self) -> None:
        if self.over_axis not in (AXIS_02, AXIS_13):
            raise DiagramError(f"over_axis must be {AXIS_02} or {AXIS_13}")


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    ends: tuple[End, End]
    word: Word = ()

    def other_end(self, which: int) -> End:
        return self.ends[1 - which]

    def directed_word(self, direction: int) -> Word:
        """Word picked up traversing the edge; direction 0 is ep0 -> ep1."""
        return self.word if direction == 0 else words.invert(self.word)


@dataclass(frozen=True)
class Face:
    id: FaceId
    steps: tuple[tuple[EdgeId, int], ...]   # directed edges around the boundary
    corners: tuple[End, ...]                # (crossing, arrival slot) per step
    holonomy: Word

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Thread:
    id: ThreadId
    route: tuple[End, ...]                  # (crossing, entry slot) per passage
    edges: tuple[tuple[EdgeId, int], ...]   # directed edges, edges[i] arrives at route[i]
    homology: tuple[int, ...]
    loop_index: Optional[int] = None        # set for crossing-free components

    def __len__(self) -> int:
        return len(self.route)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    advisories: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def empty(self) -> bool:
        return not self.errors and not self.advisories


class SurfaceDiagram:
    """Immutable diagram value; derived data is memoized on first use."""

    def __init__(
        self,
        genus: int,
        crossings: Sequence[Crossing],
        edges: Sequence[Edge],
        loops: Sequence[Word] = (),
    ):
        if genus < 1:
            raise DiagramError("genus must be >= 1")
        self.genus = genus
        self.crossings = tuple(crossings)
        self.edges = tuple(edges)
        self.loops = tuple(tuple(w) for w in loops)
        for i, c in enumerate(self.crossings):
            if c.id != i:
                raise DiagramError("crossing ids must be dense 0..n-1 in order")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise DiagramError("edge ids must be dense 0..n-1 in order")
        self._cache: dict[str, object] = {}

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def build(
        genus: int,
        over_axes: Sequence[int],
        edge_specs: Sequence[tuple[End, End, Word]],
        loops: Sequence[Word] = (),
    ) -> "SurfaceDiagram":
        crossings = [Crossing(i, ax) for i, ax in enumerate(over_axes)]
        edges = [Edge(i, (a, b), tuple(w)) for i, (a, b, w) in enumerate(edge_specs)]
        return SurfaceDiagram(genus, crossings, edges, loops)

    def replace(self, **kw) -> "SurfaceDiagram":
        return SurfaceDiagram(
            kw.get("genus", self.genus),
            kw.get("crossings", self.crossings),
            kw.get("edges", self.edges),
            kw.get("loops", self.loops),
        )

    # -- basic counts ----------------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def __repr__(self) -> str:
        return (
            f"SurfaceDiagram(g={self.genus}, C={len(self.crossings)}, "
            f"E={len(self.edges)}, loops={len(self.loops)})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceDiagram):
            return NotImplemented
        return (
            self.genus == other.genus
            and self.crossings == other.crossings
            and self.edges == other.edges
            and sorted(self.loops) == sorted(other.loops)
        )

    def __hash__(self) -> int:
        return hash((self.genus, self.crossings, self.edges, tuple(sorted(self.loops))))

    # -- dart tables -----------------------------------------------------------

    def end_map(self) -> dict[End, tuple[EdgeId, int]]:
        """(crossing, slot) -> (edge id, endpoint index). Fails on double use."""
        cached = self._cache.get("end_map")
        if cached is not None:
            return cached  # type: ignore[return-value]
        table: dict[End, tuple[EdgeId, int]] = {}
        for e in self.edges:
            for which, end in enumerate(e.ends):
                if end in table:
                    raise DiagramError(f"slot double-use at c{end[0]}.{end[1]}")
                table[end] = (e.id, which)
        self._cache["end_map"] = table
        return table

    def _check_closed(self) -> None:
        table = self.end_map()
        for c in self.crossings:
            for s in range(4):
                if (c.id, s) not in table:
                    raise DiagramError(f"unattached slot c{c.id}.{s}")
        for e in self.edges:
            for cid, s in e.ends:
                if not (0 <= cid < len(self.crossings)) or not (0 <= s < 4):
                    raise DiagramError(f"edge e{e.id} references missing slot c{cid}.{s}")

    # -- faces -------------------------------------------------------------------

    def faces(self) -> tuple[Face, ...]:
        cached = self._cache.get("faces")
        if cached is None:
            cached = self._trace_faces()
            self._cache["faces"] = cached
        return cached  # type: ignore[return-value]

    def _next_step(self, eid: EdgeId, direction: int) -> tuple[EdgeId, int, End]:
        """Follow the corner rule from a directed edge; returns next step + corner."""
        # direction 0 arrives at ends[1], direction 1 arrives at ends[0]
        arrive = self.edges[eid].ends[1] if direction == 0 else self.edges[eid].ends[0]
        cid, slot = arrive
        out_slot = (slot + 1) % 4
        eid2, which = self.end_map()[(cid, out_slot)]
        return eid2, 0 if which == 0 else 1, arrive

    def _trace_faces(self) -> tuple[Face, ...]:
        self._check_closed()
        visited: set[tuple[EdgeId, int]] = set()
        out: list[Face] = []
        for eid in range(len(self.edges)):
            for direction in (0, 1):
                if (eid, direction) in visited:
                    continue
                steps: list[tuple[EdgeId, int]] = []
                corners: list[End] = []
                holonomy: list[int] = []
                cur = (eid, direction)
                while cur not in visited:
                    visited.add(cur)
                    steps.append(cur)
                    holonomy.extend(self.edges[cur[0]].directed_word(cur[1]))
                    nxt_eid, nxt_dir, corner = self._next_step(*cur)
                    corners.append(corner)
                    cur = (nxt_eid, nxt_dir)
                if cur != (eid, direction):
                    raise DiagramError("face walk did not close on its start")
                out.append(Face(len(out), tuple(steps), tuple(corners), tuple(holonomy)))
        return tuple(out)

    def corner_face(self) -> dict[End, FaceId]:
        """Map each corner (crossing, slot s meaning the region between s and s+1)."""
        cached = self._cache.get("corner_face")
        if cached is None:
            table: dict[End, FaceId] = {}
            for f in self.faces():
                for corner in f.corners:
                    table[corner] = f.id
            cached = table
            self._cache["corner_face"] = cached
        return cached  # type: ignore[return-value]

    # -- threads ---------------------------------------------------------------

    def threads(self) -> tuple[Thread, ...]:
        cached = self._cache.get("threads")
        if cached is None:
            cached = self._trace_threads()
            self._cache["threads"] = cached
        return cached  # type: ignore[return-value]

    def _trace_threads(self) -> tuple[Thread, ...]:
        self._check_closed()
        table = self.end_map()
        claimed: set[tuple[EdgeId, int]] = set()
        out: list[Thread] = []
        for eid in range(len(self.edges)):
            for direction in (0, 1):
                if (eid, direction) in claimed:
                    continue
                route: list[End] = []
                tedges: list[tuple[EdgeId, int]] = []
                cur = (eid, direction)
                while cur not in claimed:
                    claimed.add(cur)
                    tedges.append(cur)
                    e = self.edges[cur[0]]
                    cid, slot = e.ends[1] if cur[1] == 0 else e.ends[0]
                    route.append((cid, slot))
                    exit_slot = (slot + 2) % 4
                    eid2, which = table[(cid, exit_slot)]
                    cur = (eid2, 0 if which == 0 else 1)
                if cur != (eid, direction):
                    raise DiagramError("thread walk did not close on its start")
                # claim the reverse traversal as the same physical thread
                for e2, d2 in tedges:
                    claimed.add((e2, 1 - d2))
                hom = [0] * (2 * self.genus)
                for e2, d2 in tedges:
                    vec = words.abelianize(self.edges[e2].directed_word(d2), self.genus)
                    hom = [a + b for a, b in zip(hom, vec)]
                if _lex_negative(hom):
                    # canonical orientation: homology lexicographically positive
                    route, tedges, hom = _reverse_thread(self, route, tedges, hom)
                out.append(Thread(len(out), tuple(route), tuple(tedges), tuple(hom)))
        for li, w in enumerate(self.loops):
            hom = list(words.abelianize(w, self.genus))
            if _lex_negative(hom):
                hom = [-v for v in hom]
            out.append(Thread(len(out), (), (), tuple(hom), loop_index=li))
        return tuple(out)

    def thread_of_passage(self) -> dict[End, ThreadId]:
        """Map each passage entry (crossing, entry slot) to its thread."""
        cached = self._cache.get("thread_of_passage")
        if cached is None:
            table: dict[End, ThreadId] = {}
            for t in self.threads():
                for cid, slot in t.route:
                    table[(cid, slot)] = t.id
                    table[(cid, (slot + 2) % 4)] = t.id
            cached = table
            self._cache["thread_of_passage"] = cached
        return cached  # type: ignore[return-value]

    def thread_sets(self) -> tuple[tuple[ThreadId, ...], ...]:
        """Group threads by primitive homology direction."""
        groups: dict[tuple[int, ...], list[ThreadId]] = {}
        for t in self.threads():
            prim = primitive_direction(t.homology)
            if prim is None:
                raise ZeroHomologyThread(
                    f"thread {t.id} is null-homologous; weave components must wrap the cell"
                )
            groups.setdefault(prim, []).append(t.id)
        return tuple(tuple(v) for _, v in sorted(groups.items()))

    # -- predicates --------------------------------------------------------------

    def is_alternating(self) -> bool:
        for t in self.threads():
            if not t.route:
                continue
            pattern = [self.passage_is_over(c, s) for c, s in t.route]
            n = len(pattern)
            if any(pattern[i] == pattern[(i + 1) % n] for i in range(n)):
                return False
        return True

    def passage_is_over(self, cid: CrossingId, slot: int) -> bool:
        return (slot % 2) == self.crossings[cid].over_axis

    def is_proper(self) -> tuple[bool, list[CrossingId]]:
        table = self.corner_face()
        bad = [
            c.id
            for c in self.crossings
            if len({table[(c.id, s)] for s in range(4)}) < 4
        ]
        return (not bad, bad)

    def is_reduced(self) -> tuple[bool, list[CrossingId]]:
        """Isthmus test: opposite corners in one region of the infinite diagram."""
        faces = self.faces()
        # corner -> (face id, position in the walk)
        where: dict[End, tuple[FaceId, int]] = {}
        for f in faces:
            for pos, corner in enumerate(f.corners):
                where[corner] = (f.id, pos)
        bad: list[CrossingId] = []
        for c in self.crossings:
            if any(
                self._corners_merge(where, (c.id, s), (c.id, s + 2))
                for s in (0, 1)
            ):
                bad.append(c.id)
        return (not bad, bad)

    def _corners_merge(self, where, corner_a: End, corner_b: End) -> bool:
        fa, pa = where[(corner_a[0], corner_a[1] % 4)]
        fb, pb = where[(corner_b[0], corner_b[1] % 4)]
        if fa != fb:
            return False
        face = self.faces()[fa]
        n = len(face.steps)

        def segment_word(src: int, dst: int) -> Word:
            seg: list[int] = []
            pos = src
            while pos != dst:
                pos = (pos + 1) % n
                eid, direction = face.steps[pos]
                seg.extend(self.edges[eid].directed_word(direction))
            return tuple(seg)

        return words.is_trivial(segment_word(pa, pb), self.genus) or words.is_trivial(
            segment_word(pb, pa), self.genus
        )

    # -- canonical crossing frames -------------------------------------------------

    def orient_crossings(self) -> "SurfaceDiagram":
        """Rotate frames so every over-strand sits on the slot 1-3 axis."""
        if all(c.over_axis == AXIS_13 for c in self.crossings):
            return self
        rotate = {c.id: (1 if c.over_axis == AXIS_02 else 0) for c in self.crossings}

        def remap(end: End) -> End:
            cid, slot = end
            return (cid, (slot + rotate[cid]) % 4)

        crossings = [Crossing(c.id, AXIS_13) for c in self.crossings]
        edges = [
            Edge(e.id, (remap(e.ends[0]), remap(e.ends[1])), e.word) for e in self.edges
        ]
        return SurfaceDiagram(self.genus, crossings, edges, self.loops)

    # -- validation ----------------------------------------------------------------

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        if not self.crossings and not self.edges and not self.loops:
            report.advisories.append("no crossings: empty diagram")
            return report
        if not self.crossings and self.loops and not self.edges:
            report.advisories.append("no crossings: free loops only")
            return report
        seen: dict[End, EdgeId] = {}
        for e in self.edges:
            for cid, s in e.ends:
                if not (0 <= cid < len(self.crossings)) or not (0 <= s < 4):
                    report.errors.append(f"edge e{e.id} references missing slot c{cid}.{s}")
                    continue
                if (cid, s) in seen:
                    report.errors.append(f"slot double-use at c{cid}.{s}")
                else:
                    seen[(cid, s)] = e.id
        for c in self.crossings:
            for s in range(4):
                if (c.id, s) not in seen:
                    report.errors.append(f"unattached slot c{c.id}.{s}")
        if report.errors:
            return report
        comp = _component_count(self)
        if comp > 1:
            report.errors.append(f"disconnected: {comp} components")
        try:
            nfaces = len(self.faces())
        except DiagramError as exc:
            report.errors.append(str(exc))
            return report
        expected = len(self.crossings) + 2 - 2 * self.genus
        if self.crossings and nfaces != expected:
            report.errors.append(
                f"Euler count: {nfaces} faces, expected {expected} for genus {self.genus}"
            )
        return report


def _lex_negative(vec: Sequence[int]) -> bool:
    for v in vec:
        if v:
            return v < 0
    return False


def _reverse_thread(d: SurfaceDiagram, route, tedges, hom):
    """Reverse the traversal direction of a traced thread cycle."""
    n = len(tedges)
    new_edges = [(eid, 1 - direction) for eid, direction in reversed(tedges)]
    new_route = []
    for eid, direction in new_edges:
        e = d.edges[eid]
        cid, slot = e.ends[1] if direction == 0 else e.ends[0]
        new_route.append((cid, slot))
    return new_route, new_edges, [-v for v in hom]


def primitive_direction(vec: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Homology direction divided by content, sign-normalized; None for zero."""
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    prim = [v // g for v in vec]
    if _lex_negative(prim):
        prim = [-v for v in prim]
    return tuple(prim)


def _component_count(d: SurfaceDiagram) -> int:
    n = len(d.crossings)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in d.edges:
        a, b = find(e.ends[0][0]), find(e.ends[1][0])
        if a != b:
            parent[a] = b
    roots = {find(i) for i in range(n)}
    return len(roots) + len(d.loops)


# -- text interchange format ---------------------------------------------------------


def serialize(d: SurfaceDiagram) -> str:
    """Canonical text form: genus line, crossings, edges, loops."""
    lines = [f"genus {d.genus}"]
    for c in d.crossings:
        axis = "13" if c.over_axis == AXIS_13 else "02"
        lines.append(f"crossing c{c.id} over={axis}")
    order = sorted(d.edges, key=lambda e: (e.ends, e.word))
    for e in order:
        (c0, s0), (c1, s1) = e.ends
        w = words.format_word(e.word, d.genus)
        lines.append(f"edge c{c0}.{s0} c{c1}.{s1} word={w}")
    for w in sorted(d.loops):
        lines.append(f"loop word={words.format_word(w, d.genus)}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> SurfaceDiagram:
    genus: Optional[int] = None
    crossing_axes: dict[int, int] = {}
    edge_specs: list[tuple[End, End, Word]] = []
    loops: list[Word] = []

    def parse_end(token: str) -> End:
        if not token.startswith("c") or "." not in token:
            raise DiagramError(f"bad attachment {token!r}")
        name, _, slot_s = token.partition(".")
        try:
            cid, slot = int(name[1:]), int(slot_s)
        except ValueError as exc:
            raise DiagramError(f"bad attachment {token!r}") from exc
        if not 0 <= slot <= 3:
            raise DiagramError(f"slot out of range in {token!r}")
        return (cid, slot)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "genus":
            if genus is not None:
                raise DiagramError(f"line {lineno}: duplicate genus declaration")
            genus = int(parts[1])
            if genus < 1:
                raise DiagramError(f"line {lineno}: genus must be >= 1")
        elif kind == "crossing":
            if genus is None:
                raise DiagramError(f"line {lineno}: genus must come first")
            if len(parts) != 3 or not parts[2].startswith("over="):
                raise DiagramError(f"line {lineno}: expected 'crossing cN over=..'")
            cid = int(parts[1][1:])
            axis_s = parts[2][len("over="):]
            if axis_s not in ("02", "13"):
                raise DiagramError(f"line {lineno}: over must be 02 or 13")
            if cid in crossing_axes:
                raise DiagramError(f"line {lineno}: duplicate crossing c{cid}")
            crossing_axes[cid] = AXIS_13 if axis_s == "13" else AXIS_02
        elif kind == "edge":
            if genus is None:
                raise DiagramError(f"line {lineno}: genus must come first")
            if len(parts) != 4 or not parts[3].startswith("word="):
                raise DiagramError(f"line {lineno}: expected 'edge cA.s cB.t word=..'")
            a = parse_end(parts[1])
            b = parse_end(parts[2])
            try:
                w = words.parse_word(parts[3][len("word="):], genus)
            except ValueError as exc:
                raise DiagramError(f"line {lineno}: {exc}") from exc
            edge_specs.append((a, b, w))
        elif kind == "loop":
            if genus is None:
                raise DiagramError(f"line {lineno}: genus must come first")
            if len(parts) != 2 or not parts[1].startswith("word="):
                raise DiagramError(f"line {lineno}: expected 'loop word=..'")
            try:
                loops.append(words.parse_word(parts[1][len("word="):], genus))
            except ValueError as exc:
                raise DiagramError(f"line {lineno}: {exc}") from exc
        else:
            raise DiagramError(f"line {lineno}: unknown declaration {kind!r}")

    if genus is None:
        raise DiagramError("missing genus declaration")
    ids = sorted(crossing_axes)
    if ids != list(range(len(ids))):
        raise DiagramError("crossing names must be c0..cN-1 without gaps")
    for a, b, _ in edge_specs:
        for cid, _slot in (a, b):
            if cid not in crossing_axes:
                raise DiagramError(f"edge references unknown crossing c{cid}")
    return SurfaceDiagram.build(genus, [crossing_axes[i] for i in ids], edge_specs, loops)


def isomorphic(a: SurfaceDiagram, b: SurfaceDiagram, exact_words: bool = True) -> bool:
    """Isomorphism search: relabel crossings/edges preserving slots, axes,
    and loops. With ``exact_words`` the boundary words must match letter for
    letter; without it the projections must match and corresponding threads
    must carry the same homology, which identifies diagrams that differ by
    sliding cell-side crossings along the strands. Exponential in
    principle, fine at desk scale."""
    if (
        a.genus != b.genus
        or len(a.crossings) != len(b.crossings)
        or len(a.edges) != len(b.edges)
        or sorted(a.loops) != sorted(b.loops)
    ):
        return False
    n = len(a.crossings)
    if n == 0:
        return True
    eb = b.end_map()

    def compatible(mapping: dict[int, int]) -> bool:
        for e in a.edges:
            (c0, s0), (c1, s1) = e.ends
            if c0 in mapping and c1 in mapping:
                t0, t1 = (mapping[c0], s0), (mapping[c1], s1)
                if t0 not in eb or t1 not in eb:
                    return False
                f0, f1 = eb[t0], eb[t1]
                if f0[0] != f1[0]:
                    return False
                fe = b.edges[f0[0]]
                if f0[1] == 0:
                    same = fe.ends == (t0, t1)
                    if exact_words:
                        same = same and fe.word == e.word
                else:
                    same = fe.ends == (t1, t0)
                    if exact_words:
                        same = same and fe.word == words.invert(e.word)
                if not same:
                    return False
        return True

    def threads_match(mapping: dict[int, int]) -> bool:
        passage_b = b.thread_of_passage()
        hom_b = {t.id: t.homology for t in b.threads()}
        for t in a.threads():
            if not t.route:
                continue
            cid, slot = t.route[0]
            other = hom_b[passage_b[(mapping[cid], slot)]]
            if t.homology != other:
                return False
        return True

    order = list(range(n))

    def extend(mapping: dict[int, int], used: set[int]) -> bool:
        if len(mapping) == n:
            return exact_words or threads_match(mapping)
        cid = order[len(mapping)]
        for target in range(n):
            if target in used:
                continue
            if a.crossings[cid].over_axis != b.crossings[target].over_axis:
                continue
            mapping[cid] = target
            used.add(target)
            if compatible(mapping) and extend(mapping, used):
                return True
            del mapping[cid]
            used.remove(target)
        return False

    return extend({}, set())
