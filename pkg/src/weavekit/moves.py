"""Reidemeister moves on surface weave diagrams, a seeded fuzzer, and
crossing-number bounds.

Removal sites carry holonomy guards: a one-sided or two-sided region can
only be undone when its boundary word is trivial in the surface group,
because a curl or clasp that wraps the cell is not a planar configuration
and removing it would change the weave. The third move flips a triangle
whose strands admit a top strand; its rewiring shifts every triangle-side
attachment by two slots and swaps the strand continuations into the old
side slots, which keeps all boundary words and over-axes in place.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words
from .diagram import (
    AXIS_02,
    AXIS_13,
    Crossing,
    DiagramError,
    Edge,
    End,
    Face,
    SurfaceDiagram,
)
from .states import PASS_PAIRING, smooth_crossings


class IllegalMove(DiagramError):
    pass


@dataclass(frozen=True, order=True)
class Move:
    kind: str
    params: tuple

    def __str__(self) -> str:
        return f"{self.kind} {' '.join(str(p) for p in self.params)}"


_KIND_ORDER = ("R1_add", "R1_remove", "R2_add", "R2_remove", "R3")


def _sort_key(m: Move):
    return (_KIND_ORDER.index(m.kind), m.params)


# -- site discovery --------------------------------------------------------------


def _monogon_site(d: SurfaceDiagram, face: Face) -> Optional[Move]:
    (eid, direction), = face.steps
    e = d.edges[eid]
    (c0, s0), (c1, s1) = e.ends
    if c0 != c1:
        return None
    if not words.is_trivial(e.word, d.genus):
        return None
    return Move("R1_remove", (c0,))


def _bigon_site(d: SurfaceDiagram, face: Face) -> Optional[Move]:
    (e1, d1), (e2, d2) = face.steps
    if e1 == e2:
        return None
    x1, _ = face.corners[0]
    x2, _ = face.corners[1]
    if x1 == x2:
        return None
    if not words.is_trivial(face.holonomy, d.genus):
        return None
    # the strand through one bigon edge must be on top at both crossings
    g1 = d.edges[e1]
    slot_at_x1 = g1.ends[0][1] if g1.ends[0][0] == x1 else g1.ends[1][1]
    slot_at_x2 = g1.ends[0][1] if g1.ends[0][0] == x2 else g1.ends[1][1]
    over_at_x1 = (slot_at_x1 % 2) == d.crossings[x1].over_axis
    over_at_x2 = (slot_at_x2 % 2) == d.crossings[x2].over_axis
    if over_at_x1 != over_at_x2:
        return None
    return Move("R2_remove", (min(x1, x2), max(x1, x2)))


def _triangle_site(d: SurfaceDiagram, face: Face) -> Optional[Move]:
    cids = [c for c, _ in face.corners]
    if len(set(cids)) != 3:
        return None
    if len({eid for eid, _ in face.steps}) != 3:
        return None
    corners = tuple(sorted(face.corners))
    (A, a), (B, b), (C, c) = face.corners
    # sides: arriving edge at each corner slot; strand over-ness per crossing
    def over_at(cid: int, slot: int) -> bool:
        return (slot % 2) == d.crossings[cid].over_axis

    # strand through the departing side at each crossing occupies slot+1
    strand_pairs = [
        (over_at(A, (a + 1) % 4), over_at(B, b)),   # side A->B
        (over_at(B, (b + 1) % 4), over_at(C, c)),   # side B->C
        (over_at(C, (c + 1) % 4), over_at(A, a)),   # side C->A
    ]
    if not any(o1 and o2 for o1, o2 in strand_pairs):
        return None
    return Move("R3", (corners,))


def enumerate_moves(d: SurfaceDiagram) -> list[Move]:
    """All applicable moves in a canonical order."""
    out: list[Move] = []
    for e in d.edges:
        out.append(Move("R1_add", (e.id, 1)))
        out.append(Move("R1_add", (e.id, -1)))
    faces = d.faces() if d.crossings or d.edges else ()
    for f in faces:
        if len(f) == 1:
            site = _monogon_site(d, f)
            if site:
                out.append(site)
        elif len(f) == 2:
            site = _bigon_site(d, f)
            if site:
                out.append(site)
        elif len(f) == 3:
            site = _triangle_site(d, f)
            if site:
                out.append(site)
        for i, step_a in enumerate(f.steps):
            for j, step_b in enumerate(f.steps):
                if i == j or step_a[0] == step_b[0]:
                    continue
                for over_first in (True, False):
                    out.append(Move("R2_add", (step_a, step_b, over_first)))
    return sorted(set(out), key=_sort_key)


# -- surgery ----------------------------------------------------------------------


def _rebuild(d: SurfaceDiagram, over_axes, edge_specs, loops) -> SurfaceDiagram:
    return SurfaceDiagram.build(d.genus, over_axes, edge_specs, loops)


def _apply_r1_add(d: SurfaceDiagram, eid: int, chirality: int) -> SurfaceDiagram:
    if not 0 <= eid < len(d.edges):
        raise IllegalMove(f"unknown edge e{eid}")
    x = len(d.crossings)
    over_axes = [c.over_axis for c in d.crossings]
    over_axes.append(AXIS_13 if chirality > 0 else AXIS_02)
    e = d.edges[eid]
    specs: list[tuple[End, End, words.Word]] = []
    for other in d.edges:
        if other.id != eid:
            specs.append((other.ends[0], other.ends[1], other.word))
        else:
            specs.append((e.ends[0], (x, 2), e.word))
    specs.append(((x, 0), (x, 1), ()))
    specs.append(((x, 3), e.ends[1], ()))
    return _rebuild(d, over_axes, specs, d.loops)


def _curl_slots(d: SurfaceDiagram, cid: int) -> Optional[tuple[int, int]]:
    """(loop edge id, loop slot s) when slots s, s+1 carry a loop edge."""
    table = d.end_map()
    for s in range(4):
        eid, which = table[(cid, s)]
        e = d.edges[eid]
        if e.ends[1 - which] == (cid, (s + 1) % 4):
            return eid, s
    return None


def _apply_r1_remove(d: SurfaceDiagram, cid: int) -> SurfaceDiagram:
    if not 0 <= cid < len(d.crossings):
        raise IllegalMove(f"unknown crossing c{cid}")
    curl = _curl_slots(d, cid)
    if curl is None:
        raise IllegalMove(f"crossing c{cid} carries no curl")
    loop_eid, s = curl
    loop_edge = d.edges[loop_eid]
    if not words.is_trivial(loop_edge.word, d.genus):
        raise IllegalMove(f"curl at c{cid} wraps the cell; removing it changes the weave")
    table = d.end_map()
    in_eid, in_which = table[(cid, (s + 2) % 4)]
    out_eid, out_which = table[(cid, (s + 3) % 4)]
    # word of the loop traversed from slot s to slot s+1
    loop_word = loop_edge.word if loop_edge.ends[0] == (cid, s) else words.invert(loop_edge.word)

    over_axes = [c.over_axis for c in d.crossings if c.id != cid]

    def remap(end: End) -> End:
        c, slot = end
        return (c - 1 if c > cid else c, slot)

    specs: list[tuple[End, End, words.Word]] = []
    loops = list(d.loops)
    if in_eid == out_eid:
        # the curl sat on a closed one-crossing component
        e = d.edges[in_eid]
        word_in = e.word if e.ends[1] == (cid, (s + 2) % 4) else words.invert(e.word)
        loops.append(words.free_reduce(words.concat(word_in, loop_word)))
        for other in d.edges:
            if other.id not in (loop_eid, in_eid):
                specs.append((remap(other.ends[0]), remap(other.ends[1]), other.word))
    else:
        e_in = d.edges[in_eid]
        e_out = d.edges[out_eid]
        tail = e_in.ends[1 - in_which]
        head = e_out.ends[1 - out_which]
        # word traversed tail -> crossing: edge arrives at (cid, s+2) at index in_which
        word_in = e_in.word if e_in.ends[1] == (cid, (s + 2) % 4) else words.invert(e_in.word)
        word_out = e_out.word if e_out.ends[0] == (cid, (s + 3) % 4) else words.invert(e_out.word)
        new_word = words.free_reduce(words.concat(word_in, loop_word, word_out))
        placed = False
        for other in d.edges:
            if other.id in (loop_eid, in_eid, out_eid):
                if not placed and other.id == min(in_eid, out_eid):
                    specs.append((remap(tail), remap(head), new_word))
                    placed = True
                continue
            specs.append((remap(other.ends[0]), remap(other.ends[1]), other.word))
        if not placed:
            specs.append((remap(tail), remap(head), new_word))
    return _rebuild(d, over_axes, specs, loops)


def _apply_r2_add(
    d: SurfaceDiagram,
    step_a: tuple[int, int],
    step_b: tuple[int, int],
    over_first: bool,
) -> SurfaceDiagram:
    eid_a, dir_a = step_a
    eid_b, dir_b = step_b
    if eid_a == eid_b:
        raise IllegalMove("the two strands of a push must be distinct edges")
    face = None
    for f in d.faces():
        steps = set(f.steps)
        if (eid_a, dir_a) in steps and (eid_b, dir_b) in steps:
            face = f
            break
    if face is None:
        raise IllegalMove("strands do not border a common region")
    # the finger travels from the head end of the pushed strand to the tail
    # end of the crossed one; it crosses whichever cell-side arcs the region
    # boundary between those corners records
    i = face.steps.index((eid_a, dir_a))
    j = face.steps.index((eid_b, dir_b))
    n = len(face.steps)
    between: list[int] = []
    pos = (i + 1) % n
    while pos != j:
        eid_x, dir_x = face.steps[pos]
        between.extend(d.edges[eid_x].directed_word(dir_x))
        pos = (pos + 1) % n
    path = words.free_reduce(tuple(between))
    e, fe = d.edges[eid_a], d.edges[eid_b]
    tail_e = e.ends[0] if dir_a == 0 else e.ends[1]
    head_e = e.ends[1] if dir_a == 0 else e.ends[0]
    word_e = e.directed_word(dir_a)
    tail_f = fe.ends[0] if dir_b == 0 else fe.ends[1]
    head_f = fe.ends[1] if dir_b == 0 else fe.ends[0]
    word_f = fe.directed_word(dir_b)
    x1 = len(d.crossings)
    x2 = x1 + 1
    axis = AXIS_13 if over_first else AXIS_02
    over_axes = [c.over_axis for c in d.crossings] + [axis, axis]
    specs: list[tuple[End, End, words.Word]] = []
    for other in d.edges:
        if other.id in (eid_a, eid_b):
            continue
        specs.append((other.ends[0], other.ends[1], other.word))
    specs.append((tail_e, (x1, 1), words.free_reduce(words.concat(word_e, path))))
    specs.append(((x2, 1), head_e, words.invert(path)))       # finger return leg
    specs.append(((x1, 3), (x2, 3), ()))                      # finger tip
    specs.append((tail_f, (x2, 0), ()))                       # f up to the push
    specs.append(((x1, 2), head_f, word_f))                   # f past the push
    specs.append(((x2, 2), (x1, 0), ()))                      # crossed middle
    return _rebuild(d, over_axes, specs, d.loops)


def _find_bigon(d: SurfaceDiagram, x1: int, x2: int) -> Optional[Face]:
    for f in d.faces():
        if len(f) != 2:
            continue
        cids = sorted(c for c, _ in f.corners)
        if cids == sorted((x1, x2)):
            return f
    return None


def _apply_r2_remove(d: SurfaceDiagram, x1: int, x2: int) -> SurfaceDiagram:
    for cid in (x1, x2):
        if not 0 <= cid < len(d.crossings):
            raise IllegalMove(f"unknown crossing c{cid}")
    if x1 == x2:
        raise IllegalMove("a two-sided region needs two distinct crossings")
    face = _find_bigon(d, x1, x2)
    if face is None:
        raise IllegalMove(f"no two-sided region between c{x1} and c{x2}")
    if _bigon_site(d, face) is None:
        raise IllegalMove(f"region between c{x1} and c{x2} is not removable")
    return smooth_crossings(d, {x1: PASS_PAIRING, x2: PASS_PAIRING})


def _apply_r3(d: SurfaceDiagram, corners: tuple[End, End, End]) -> SurfaceDiagram:
    by_id = {c: s for c, s in corners}
    if len(by_id) != 3:
        raise IllegalMove("a triangle site needs three distinct crossings")
    face = None
    for f in d.faces():
        if len(f) == 3 and tuple(sorted(f.corners)) == tuple(sorted(corners)):
            face = f
            break
    if face is None:
        raise IllegalMove("no such triangle region")
    if _triangle_site(d, face) is None:
        raise IllegalMove("triangle has no strand passing over both others")
    remap: dict[End, End] = {}
    cs = face.corners
    table = d.end_map()
    side_ids: list[int] = []
    for idx in range(3):
        X, x = cs[idx]
        Y, y = cs[(idx + 1) % 3]
        side_ids.append(table[(X, (x + 1) % 4)][0])
        # side X->Y sits at (X, x+1) and (Y, y); it moves two slots on;
        # the strand continuations swap into the old side slots
        remap[(X, (x + 1) % 4)] = (X, (x + 3) % 4)
        remap[(Y, y)] = (Y, (y + 2) % 4)
        remap[(X, (x + 3) % 4)] = (Y, y)
        remap[(Y, (y + 2) % 4)] = (X, (x + 1) % 4)
    specs = [
        (remap.get(e.ends[0], e.ends[0]), remap.get(e.ends[1], e.ends[1]), e.word)
        for e in d.edges
    ]
    out = _rebuild(d, [c.over_axis for c in d.crossings], specs, d.loops)
    if all(not d.edges[eid].word for eid in side_ids):
        # no cell-side arcs cross the triangle: the flip moves nothing past
        # anything and every word stays put
        return out
    if d.genus != 1:
        raise IllegalMove(
            "triangle sides carry cell identifications; sliding across them "
            "is only supported on the torus"
        )
    return _resolve_r3_words(d, out, side_ids)


def _resolve_r3_words(
    d: SurfaceDiagram, flipped: SurfaceDiagram, side_ids: list[int]
) -> SurfaceDiagram:
    """Re-derive local words after flipping a triangle on the torus.

    Sliding a strand across the opposite crossing carries it past whatever
    cell-side arcs run through the triangle, so letters can migrate
    between the triangle sides and the six strand continuations. The new
    words are pinned by two exact requirements: every region of the
    result is null-homologous, and every thread keeps its homology class.
    Free directions (gauge moves that slide letters through a crossing)
    are resolved toward the old words.
    """
    from fractions import Fraction

    table = d.end_map()
    local: list[int] = list(side_ids)
    for X, x in _corner_list(d, side_ids):
        for s in (2, 3):
            eid = table[(X, (x + s) % 4)][0]
            if eid not in local:
                local.append(eid)
    unknown = {eid: k for k, eid in enumerate(local)}
    n_unknown = len(local)

    blank = [
        Edge(e.id, e.ends, () if e.id in unknown else e.word)
        for e in flipped.edges
    ]
    skeleton = SurfaceDiagram(flipped.genus, flipped.crossings, blank, flipped.loops)

    rows: list[list[int]] = []
    rhs: list[tuple[int, int]] = []

    def add_walk(steps, target=(0, 0)) -> None:
        coef = [0] * n_unknown
        known = [0, 0]
        for eid, direction in steps:
            sign = 1 if direction == 0 else -1
            if eid in unknown:
                coef[unknown[eid]] += sign
            else:
                vec = words.abelianize(flipped.edges[eid].directed_word(direction), 1)
                known[0] += vec[0]
                known[1] += vec[1]
        rows.append(coef)
        rhs.append((target[0] - known[0], target[1] - known[1]))

    for f in skeleton.faces():
        add_walk(f.steps)

    # threads of the flipped diagram keep the homology classes they had.
    # Strands traverse the triangle sides in the opposite direction after
    # the flip (their two crossings swap order along the strand), so the
    # anchor tying a new thread to an old one must be a non-side edge;
    # every strand through a corner continues into one, so one exists.
    old_dir_hom: dict[tuple[int, int], tuple[int, int]] = {}
    for t in d.threads():
        for eid, direction in t.edges:
            old_dir_hom[(eid, direction)] = (t.homology[0], t.homology[1])
            old_dir_hom[(eid, 1 - direction)] = (-t.homology[0], -t.homology[1])
    sides = set(side_ids)
    for t in skeleton.threads():
        anchor = next(step for step in t.edges if step[0] not in sides)
        add_walk(t.edges, old_dir_hom[anchor])

    old_vals = [words.abelianize(d.edges[eid].word, 1) for eid in local]

    def solve(coord: int) -> Optional[list[int]]:
        m = [
            [Fraction(c) for c in row] + [Fraction(rhs[i][coord])]
            for i, row in enumerate(rows)
        ]
        pivots: list[tuple[int, int]] = []
        r = 0
        for c in range(n_unknown):
            sel = next((i for i in range(r, len(m)) if m[i][c]), None)
            if sel is None:
                continue
            m[r], m[sel] = m[sel], m[r]
            m[r] = [v / m[r][c] for v in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    factor = m[i][c]
                    m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
            pivots.append((r, c))
            r += 1
        for i in range(r, len(m)):
            if m[i][n_unknown]:
                return None
        sol = [Fraction(old_vals[k][coord]) for k in range(n_unknown)]
        for row_i, c in reversed(pivots):
            acc = m[row_i][n_unknown]
            for c2 in range(n_unknown):
                if c2 != c and m[row_i][c2]:
                    acc -= m[row_i][c2] * sol[c2]
            sol[c] = acc
        if any(v.denominator != 1 for v in sol):
            return None
        return [int(v) for v in sol]

    xa = solve(0)
    xb = solve(1)
    if xa is None or xb is None:
        raise IllegalMove("could not rebalance cell-side words across the triangle")

    def vec_word(va: int, vb: int) -> words.Word:
        out: list[int] = []
        out.extend([1 if va > 0 else -1] * abs(va))
        out.extend([2 if vb > 0 else -2] * abs(vb))
        return tuple(out)

    final = [
        Edge(
            e.id,
            e.ends,
            vec_word(xa[unknown[e.id]], xb[unknown[e.id]]) if e.id in unknown else e.word,
        )
        for e in flipped.edges
    ]
    result = SurfaceDiagram(flipped.genus, flipped.crossings, final, flipped.loops)
    for f in result.faces():
        if any(words.abelianize(f.holonomy, 1)):
            raise AssertionError("triangle word rebalancing left a wrapped region")
    return result


def _corner_list(d: SurfaceDiagram, side_ids: list[int]) -> list[End]:
    """Recover the triangle's (crossing, corner slot) list from its sides."""
    table = d.end_map()
    corners: list[End] = []
    for cid in range(len(d.crossings)):
        for x in range(4):
            eid_out = table[(cid, (x + 1) % 4)][0]
            eid_in = table[(cid, x)][0]
            if eid_out in side_ids and eid_in in side_ids:
                corners.append((cid, x))
    return corners


def apply_move(d: SurfaceDiagram, m: Move) -> SurfaceDiagram:
    if m.kind == "R1_add":
        return _apply_r1_add(d, *m.params)
    if m.kind == "R1_remove":
        return _apply_r1_remove(d, *m.params)
    if m.kind == "R2_add":
        return _apply_r2_add(d, *m.params)
    if m.kind == "R2_remove":
        return _apply_r2_remove(d, *m.params)
    if m.kind == "R3":
        return _apply_r3(d, *m.params)
    raise IllegalMove(f"unknown move kind {m.kind!r}")


# -- fuzzing -----------------------------------------------------------------------


@dataclass
class MoveTrace:
    seed: int
    start: SurfaceDiagram
    moves: list[Move] = field(default_factory=list)
    diagrams: list[SurfaceDiagram] = field(default_factory=list)

    @property
    def end(self) -> SurfaceDiagram:
        return self.diagrams[-1] if self.diagrams else self.start

    def replay(self) -> SurfaceDiagram:
        cur = self.start
        for m in self.moves:
            cur = apply_move(cur, m)
        return cur


_REMOVE_KINDS = {"R1_remove", "R2_remove"}
_DELTA = {"R1_add": 1, "R1_remove": -1, "R2_add": 2, "R2_remove": -2, "R3": 0}


def fuzz(
    d: SurfaceDiagram,
    steps: int,
    seed: int,
    max_crossings: int = 12,
    keep_diagrams: bool = True,
) -> MoveTrace:
    """Seeded random move walk, preferring removals near the crossing cap."""
    rng = random.Random(seed)
    trace = MoveTrace(seed, d)
    cur = d
    for _ in range(steps):
        options = [
            m
            for m in enumerate_moves(cur)
            if len(cur.crossings) + _DELTA[m.kind] <= max_crossings
        ]
        if not options:
            break
        if len(cur.crossings) > 0.75 * max_crossings:
            removals = [m for m in options if m.kind in _REMOVE_KINDS]
            if removals:
                options = removals
        # choose the kind first so rare sites still get exercised
        kinds = sorted({m.kind for m in options})
        kind = rng.choice(kinds)
        pick = rng.choice([m for m in options if m.kind == kind])
        cur = apply_move(cur, pick)
        trace.moves.append(pick)
        if keep_diagrams:
            trace.diagrams.append(cur)
    if not keep_diagrams:
        trace.diagrams.append(cur)
    return trace


def simplify(
    d: SurfaceDiagram,
    seed: int = 0,
    max_rounds: int = 200,
    restarts: int = 4,
) -> SurfaceDiagram:
    """Budgeted greedy reduction: removals first, triangle flips to unstick."""
    best = d

    def greedy(cur: SurfaceDiagram) -> SurfaceDiagram:
        while True:
            removals = [m for m in enumerate_moves(cur) if m.kind in _REMOVE_KINDS]
            if not removals:
                return cur
            cur = apply_move(cur, removals[0])

    for attempt in range(restarts):
        rng = random.Random(seed + attempt)
        cur = greedy(d)
        for _ in range(max_rounds):
            if len(cur.crossings) < len(best.crossings):
                best = cur
            moves = enumerate_moves(cur)
            removals = [m for m in moves if m.kind in _REMOVE_KINDS]
            if removals:
                cur = apply_move(cur, removals[0])
                continue
            flips = [m for m in moves if m.kind == "R3"]
            if not flips:
                break
            cur = apply_move(cur, rng.choice(flips))
        if len(cur.crossings) < len(best.crossings):
            best = cur
    return best


# -- crossing-number bounds -----------------------------------------------------------


def crossing_number_bounds(
    d: SurfaceDiagram,
    seed: int = 0,
    budget: Optional[int] = None,
    restarts: int = 4,
) -> dict[str, object]:
    """Span-based lower bound and a search-based upper bound.

    The lower bound reads span <= 4C - 4g backwards; it is only certified
    when the bracket has a contribution from states with trivial loops
    (the derivation does not cover windings-only values).
    """
    from .invariants import bracket

    b = bracket(d, budget=budget)
    certified = () in b.parts
    if b.is_zero:
        lower = 0
        certified = False
    else:
        span = b.span()
        lower = -(-span // 4) + d.genus if certified else 0
    reduced = simplify(d, seed=seed, restarts=restarts)
    upper = len(reduced.crossings)
    return {
        "lower": lower,
        "upper": upper,
        "certified_lower": certified,
        "simplified": reduced,
    }
