"""Canonical form of winding sets under the twist action, and cell-size tools.

Re-cutting the unit cell acts on every winding vector by a common matrix
in Sp(2g, Z) (SL2(Z) on the torus). The canonical representative of a
winding multiset minimizes the total squared norm over that orbit; on the
torus the minimum is found exactly by Gauss lattice reduction of the Gram
matrix followed by a certified enumeration of all minimizing bases, with a
deterministic tie-break. Higher genus uses greedy descent over symplectic
transvections and is reported as locally optimal only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

from . import words
from .diagram import DiagramError, SurfaceDiagram, Edge, Crossing
from .states import normalize_class

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]
WindingSet = tuple[Vector, ...]


class NonSymplectic(ValueError):
    """The supplied matrix does not preserve the intersection form."""


class UnsupportedGenus(DiagramError):
    """The operation is only implemented for the torus in this version."""


# -- small integer matrix helpers ----------------------------------------------


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b[0]), len(b)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def mat_T(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def symplectic_form(genus: int) -> Matrix:
    n = 2 * genus
    J = [[0] * n for _ in range(n)]
    for i in range(genus):
        J[i][genus + i] = 1
        J[genus + i][i] = -1
    return tuple(tuple(row) for row in J)


def is_symplectic(U: Matrix, genus: int) -> bool:
    n = 2 * genus
    if len(U) != n or any(len(row) != n for row in U):
        return False
    J = symplectic_form(genus)
    return mat_mul(mat_T(U), mat_mul(J, U)) == J


def vec_mul(v: Vector, U: Matrix) -> Vector:
    n = len(U[0])
    return tuple(sum(v[i] * U[i][j] for i in range(len(v))) for j in range(n))


# -- winding sets ------------------------------------------------------------------


def winding_set(vectors: Iterable[Sequence[int]]) -> WindingSet:
    """Normalize to the canonical multiset form (sorted, sign-normalized)."""
    out = []
    for v in vectors:
        nv = normalize_class(tuple(v))
        out.append(nv if nv is not None else tuple(v))
    return tuple(sorted(out))


def q_functional(V: Iterable[Sequence[int]]) -> int:
    """Total squared Euclidean norm of the winding vectors."""
    return sum(sum(x * x for x in v) for v in V)


def apply_twist(V: Iterable[Sequence[int]], U: Matrix, genus: int) -> WindingSet:
    if not is_symplectic(U, genus):
        raise NonSymplectic("matrix does not satisfy U^T J U = J")
    return winding_set(vec_mul(tuple(v), U) for v in V)


@dataclass(frozen=True)
class CanonicalResult:
    winding: WindingSet
    matrix: Matrix
    q_before: int
    q_after: int
    certified: bool


# -- exact minimization on the torus -------------------------------------------------


def _gram(vs: Sequence[Vector]) -> tuple[int, int, int]:
    g00 = sum(v[0] * v[0] for v in vs)
    g01 = sum(v[0] * v[1] for v in vs)
    g11 = sum(v[1] * v[1] for v in vs)
    return g00, g01, g11


def _canonical_g1(vs: Sequence[Vector]) -> CanonicalResult:
    q_before = q_functional(vs)
    g00, g01, g11 = _gram(vs)

    def q(u: tuple[int, int]) -> int:
        return g00 * u[0] * u[0] + 2 * g01 * u[0] * u[1] + g11 * u[1] * u[1]

    def bform(u: tuple[int, int], w: tuple[int, int]) -> int:
        return (
            g00 * u[0] * w[0]
            + g01 * (u[0] * w[1] + u[1] * w[0])
            + g11 * u[1] * w[1]
        )

    if g00 == 0 and g01 == 0 and g11 == 0:
        return CanonicalResult(winding_set(vs), identity(2), q_before, q_before, True)

    det_g = g00 * g11 - g01 * g01
    if det_g == 0:
        # all vectors on one line through a primitive direction p
        p = None
        for v in vs:
            if v != (0, 0):
                g = gcd(abs(v[0]), abs(v[1]))
                p = (v[0] // g, v[1] // g)
                break
        assert p is not None
        x, y = _bezout(p[0], p[1])
        U = ((x, -p[1]), (y, p[0]))  # columns (x,y) and (-p2,p1), det = 1
        out = winding_set(vec_mul(v, U) for v in vs)
        return CanonicalResult(out, U, q_before, q_functional(out), True)

    # Gauss-reduce a basis (u1, u2) of Z^2 for the quadratic form q
    u1, u2 = (1, 0), (0, 1)
    while True:
        if q(u2) < q(u1):
            u1, u2 = u2, (-u1[0], -u1[1])
        qa = q(u1)
        mu = _nearest_int(bform(u1, u2), qa)
        if mu:
            u2 = (u2[0] - mu * u1[0], u2[1] - mu * u1[1])
        if q(u2) >= q(u1):
            break
    q_star = q(u1) + q(u2)

    # certified enumeration of every basis achieving q(u1)+q(u2) = minimum:
    # q(u) >= (det G / trace G) |u|^2 bounds the search box exactly
    trace_g = g00 + g11
    bound_sq = Fraction(q_star * trace_g, det_g)
    B = isqrt(int(bound_sq)) + 1
    shorts = [
        (ux, uy)
        for ux in range(-B, B + 1)
        for uy in range(-B, B + 1)
        if (ux, uy) != (0, 0) and q((ux, uy)) <= q_star
    ]
    best_q: Optional[int] = None
    for a in shorts:
        for b in shorts:
            if a[0] * b[1] - a[1] * b[0] == 1:
                s = q(a) + q(b)
                if best_q is None or s < best_q:
                    best_q = s
    assert best_q is not None and best_q <= q_star
    candidates: list[tuple[WindingSet, Matrix]] = []
    for a in shorts:
        for b in shorts:
            if a[0] * b[1] - a[1] * b[0] == 1 and q(a) + q(b) == best_q:
                U = ((a[0], b[0]), (a[1], b[1]))
                candidates.append((winding_set(vec_mul(v, U) for v in vs), U))
    top_set = max(s for s, _ in candidates)
    top_matrix = min(U for s, U in candidates if s == top_set)
    return CanonicalResult(top_set, top_matrix, q_before, best_q, True)


def _bezout(a: int, b: int) -> tuple[int, int]:
    """Some (x, y) with a x + b y = gcd(a, b) = 1 for coprime inputs."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _nearest_int(num: int, den: int) -> int:
    """Round num/den to the nearest integer, ties toward zero."""
    if den == 0:
        return 0
    q, r = divmod(num, den)
    if 2 * abs(r) > den:
        return q + 1
    if 2 * abs(r) == den:
        return q + (1 if q < 0 else 0)
    return q


# -- greedy descent for higher genus ---------------------------------------------------


def _transvection_vectors(genus: int) -> list[Vector]:
    n = 2 * genus
    vecs: list[Vector] = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        vecs.append(tuple(e))
    for i in range(n):
        for j in range(i + 1, n):
            for sj in (1, -1):
                e = [0] * n
                e[i] = 1
                e[j] = sj
                vecs.append(tuple(e))
    return vecs


def _transvection(v: Vector, sign: int, genus: int) -> Matrix:
    """x -> x + sign * <x, v> v acting on row vectors."""
    n = 2 * genus
    J = symplectic_form(genus)
    jv = [sum(J[i][k] * v[k] for k in range(n)) for i in range(n)]
    return tuple(
        tuple((1 if i == j else 0) + sign * jv[i] * v[j] for j in range(n))
        for i in range(n)
    )


def _canonical_descent(vs: Sequence[Vector], genus: int) -> CanonicalResult:
    q_before = q_functional(vs)
    gens = [
        _transvection(v, s, genus) for v in _transvection_vectors(genus) for s in (1, -1)
    ]
    starts = [identity(2 * genus)] + gens

    def descend(U0: Matrix) -> tuple[int, Matrix]:
        U = U0
        cur = [vec_mul(tuple(v), U) for v in vs]
        cur_q = q_functional(cur)
        improved = True
        while improved:
            improved = False
            for M in gens:
                cand = [vec_mul(v, M) for v in cur]
                cq = q_functional(cand)
                if cq < cur_q:
                    U = mat_mul(U, M)
                    cur, cur_q = cand, cq
                    improved = True
        return cur_q, U

    best_q, best_u = None, None
    for U0 in starts:
        cq, U = descend(U0)
        if best_q is None or cq < best_q or (cq == best_q and U < best_u):
            best_q, best_u = cq, U
    out = winding_set(vec_mul(tuple(v), best_u) for v in vs)
    return CanonicalResult(out, best_u, q_before, best_q, False)


def canonical_form(V: Iterable[Sequence[int]], genus: int) -> CanonicalResult:
    """Twist-orbit representative minimizing the total squared norm.

    Exact and certified on the torus; locally optimal (greedy transvection
    descent, flagged uncertified) for genus >= 2. Empty sets return the
    identity.
    """
    vs = [tuple(v) for v in V]
    if genus < 1:
        raise DiagramError("genus must be >= 1")
    for v in vs:
        if len(v) != 2 * genus:
            raise DiagramError("winding vectors must have length 2*genus")
    if not vs:
        return CanonicalResult((), identity(2 * genus), 0, 0, True)
    if genus == 1:
        return _canonical_g1(vs)
    return _canonical_descent(vs, genus)


def brute_force_minimum(
    V: Iterable[Sequence[int]], genus: int, entry_bound: int
) -> tuple[int, WindingSet]:
    """Reference minimization over all symplectic matrices with bounded entries.

    Exhaustive only for genus 1, where the group is SL2(Z).
    """
    if genus != 1:
        raise UnsupportedGenus("brute-force search is defined for the torus only")
    vs = [tuple(v) for v in V]
    best_q = q_functional(vs)
    best_set = winding_set(vs)
    rng = range(-entry_bound, entry_bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c != 1:
                        continue
                    U = ((a, b), (c, d))
                    moved = [vec_mul(v, U) for v in vs]
                    qv = q_functional(moved)
                    key = winding_set(moved)
                    if qv < best_q or (qv == best_q and key > best_set):
                        best_q, best_set = qv, key
    return best_q, best_set


# -- Dehn twists on torus diagrams ------------------------------------------------------


def twist_matrix(curve: str, direction: int) -> Matrix:
    """Homology action of a torus twist, for row vectors (a-count, b-count)."""
    if curve == "a":
        return ((1, 0), (direction, 1))
    if curve == "b":
        return ((1, direction), (0, 1))
    raise ValueError("curve must be 'a' or 'b'")


def dehn_twist_diagram(
    d: SurfaceDiagram, curve: str, direction: int = 1
) -> SurfaceDiagram:
    """Re-cut the torus cell along one marking curve.

    Every boundary word is rewritten by the induced automorphism
    (b -> b a^dir for the 'a' curve, a -> a b^dir for 'b'); the underlying
    graph, crossings, and over/under data are untouched, so the result is
    a diagram of the same weave on a re-marked cell.
    """
    if d.genus != 1:
        raise UnsupportedGenus("diagram twists are implemented for genus 1")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if curve not in ("a", "b"):
        raise ValueError("curve must be 'a' or 'b'")

    def rewrite(word: words.Word) -> words.Word:
        out: list[int] = []
        for letter in word:
            if curve == "a":
                if letter == 2:
                    out.extend((2, 1 if direction > 0 else -1))
                elif letter == -2:
                    out.extend((-1 if direction > 0 else 1, -2))
                else:
                    out.append(letter)
            else:
                if letter == 1:
                    out.extend((1, 2 if direction > 0 else -2))
                elif letter == -1:
                    out.extend((-2 if direction > 0 else 2, -1))
                else:
                    out.append(letter)
        return tuple(out)

    edges = [Edge(e.id, e.ends, rewrite(e.word)) for e in d.edges]
    loops = [rewrite(w) for w in d.loops]
    return SurfaceDiagram(d.genus, d.crossings, edges, loops)


# -- diagram size ------------------------------------------------------------------------


def size(d: SurfaceDiagram) -> int:
    """Number of distinct regions incident to at least one crossing."""
    if not d.crossings:
        return 0
    incident = {f.id for f in d.faces() if f.corners}
    return len(incident)


def _slot_preserving_automorphisms(d: SurfaceDiagram) -> list[dict[int, int]]:
    """Nontrivial graph automorphisms fixing slot labels and over-axes."""
    n = len(d.crossings)
    if n < 2:
        return []
    table = d.end_map()
    out: list[dict[int, int]] = []
    for target in range(1, n):
        if d.crossings[0].over_axis != d.crossings[target].over_axis:
            continue
        phi = {0: target}
        queue = [0]
        ok = True
        while queue and ok:
            c = queue.pop()
            t = phi[c]
            for s in range(4):
                eid, which = table[(c, s)]
                c2, s2 = d.edges[eid].ends[1 - which]
                eid2, which2 = table[(t, s)]
                c2t, s2t = d.edges[eid2].ends[1 - which2]
                if s2t != s2 or d.crossings[c2].over_axis != d.crossings[c2t].over_axis:
                    ok = False
                    break
                if c2 in phi:
                    if phi[c2] != c2t:
                        ok = False
                        break
                else:
                    phi[c2] = c2t
                    queue.append(c2)
        if not ok or len(phi) != n or len(set(phi.values())) != n:
            continue
        out.append(phi)
    return out


def _orbit_sizes(phi: dict[int, int]) -> Optional[int]:
    """Common orbit length when the action is free; None otherwise."""
    n = len(phi)
    seen: set[int] = set()
    length: Optional[int] = None
    for start in range(n):
        if start in seen:
            continue
        orbit = [start]
        cur = phi[start]
        while cur != start:
            if cur in orbit:
                return None
            orbit.append(cur)
            cur = phi[cur]
        seen.update(orbit)
        if length is None:
            length = len(orbit)
        elif length != len(orbit):
            return None
    return length if length and length > 1 else None


def _edge_key(d: SurfaceDiagram, phi: dict[int, int], eid: int) -> tuple:
    (c0, s0), (c1, s1) = d.edges[eid].ends
    a, b = (phi[c0], s0), (phi[c1], s1)
    return (a, b) if a <= b else (b, a)


def _acts_freely(d: SurfaceDiagram, phi: dict[int, int]) -> bool:
    """No crossing, edge, or face is preserved by any power of phi."""
    n = _orbit_sizes(phi)
    if n is None:
        return False
    table = d.end_map()
    power = dict(phi)
    for _ in range(n - 1):
        if any(power[c] == c for c in power):
            return False
        for e in d.edges:
            (c0, s0), (c1, s1) = e.ends
            eid_img, _ = table[(power[c0], s0)]
            if eid_img == e.id:
                return False
        for f in d.faces():
            corners_img = {(power[c], s) for c, s in f.corners}
            if corners_img == set(f.corners):
                return False
        power = {c: phi[power[c]] for c in power}
    return True


def _quotient(d: SurfaceDiagram, phi: dict[int, int]) -> Optional[SurfaceDiagram]:
    """Quotient diagram by the free cyclic action, words dropped."""
    n = len(d.crossings)
    order = _orbit_sizes(phi)
    if order is None or n % order != 0:
        return None
    rep: dict[int, int] = {}
    for start in range(n):
        if start in rep:
            continue
        orbit = [start]
        cur = phi[start]
        while cur != start:
            orbit.append(cur)
            cur = phi[cur]
        root = min(orbit)
        for c in orbit:
            rep[c] = root
    roots = sorted(set(rep.values()))
    new_id = {r: i for i, r in enumerate(roots)}
    over = [d.crossings[r].over_axis for r in roots]
    seen_edges: set[tuple] = set()
    specs = []
    for e in d.edges:
        (c0, s0), (c1, s1) = e.ends
        key = tuple(
            sorted([(new_id[rep[c0]], s0), (new_id[rep[c1]], s1)])
        )
        if key in seen_edges:
            continue
        seen_edges.add(key)
        specs.append(((new_id[rep[c0]], s0), (new_id[rep[c1]], s1), ()))
    expected_edges = len(d.edges) // order
    if len(specs) != expected_edges:
        return None
    try:
        dd = SurfaceDiagram.build(d.genus, over, specs)
        dd.faces()
    except DiagramError:
        return None
    nfaces = len(dd.faces())
    genus2 = (len(dd.crossings) + 2 - nfaces)
    if genus2 % 2 != 0 or genus2 // 2 < 1:
        return None
    if genus2 // 2 != d.genus:
        dd = SurfaceDiagram.build(genus2 // 2, over, specs)
    return dd


def is_minimal_size(d: SurfaceDiagram) -> bool:
    """True when no free translation-like symmetry lets the cell shrink.

    A diagram is reducible when some nontrivial slot- and over-preserving
    automorphism acts freely on crossings, edges, and regions, and the
    quotient is a well-formed diagram that preserves alternation whenever
    the input is alternating.
    """
    if not d.crossings:
        return True
    alternating = d.is_alternating()
    for phi in _slot_preserving_automorphisms(d):
        if not _acts_freely(d, phi):
            continue
        q = _quotient(d, phi)
        if q is None:
            continue
        if alternating and not q.is_alternating():
            continue
        return False
    return True
