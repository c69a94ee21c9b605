import itertools

import pytest

from fixtures import grid_weave, plain_weave_2x2, single_loop, torus_curl, twill_4x4
from weavekit import laurent
from weavekit.diagram import SurfaceDiagram, isomorphic
from weavekit.invariants import (
    BracketValue,
    NotCheckerboardColorable,
    TooManyCrossings,
    adequacy,
    bracket,
    bracket_by_skein,
    checkerboard_coloring,
    crossing_signs,
    degree_bounds_check,
    degree_stats,
    format_key,
    full_winding_multiset,
    jones,
    kauffman_f,
    linking_matrix,
    linking_number,
    r_parallel,
    state_loop_count,
    writhe,
    writhe_per_component,
)
from weavekit.moves import Move, apply_move
from weavekit.states import split

PLAIN_BRACKET = (
    "<> : -1A^6 + 3A^2 + 3A^-2 + -1A^-6; "
    "<(0,1)^2> : (2A^0) * d^-1; <(1,-1)^2> : (1A^0) * d^-1; "
    "<(1,0)^2> : (2A^0) * d^-1; <(1,1)^2> : (1A^0) * d^-1"
)

CURL_BRACKET = "<(1,-1)^1> : (1A^1) * d^-1; <(1,1)^1> : (1A^-1) * d^-1"


def test_trivial_loop_brackets():
    assert bracket(single_loop(())).format() == "<> : 1A^0"
    two = SurfaceDiagram.build(1, [], [], [(), ()])
    assert bracket(two).part(()) == laurent.power(laurent.LOOP_FACTOR, 2)


def test_disjoint_circle_multiplies_by_loop_factor():
    base = single_loop((1,))
    extra = SurfaceDiagram.build(1, [], [], [(1,), ()])
    key = ((1, 0),)
    assert bracket(extra).part(key) == laurent.mul(
        bracket(base).part(key), laurent.LOOP_FACTOR
    )


def test_plain_weave_bracket_frozen():
    b = bracket(plain_weave_2x2())
    assert b.format() == PLAIN_BRACKET
    assert b.max_degree() == 6
    assert b.min_degree() == -6
    assert b.span() == 12


def test_torus_curl_bracket_frozen():
    assert bracket(torus_curl()).format() == CURL_BRACKET


def test_state_sum_equals_skein_recursion():
    for d in (plain_weave_2x2(), torus_curl(), single_loop((1,)), grid_weave(1)):
        assert bracket(d) == bracket_by_skein(d)


def test_budget_guard():
    with pytest.raises(TooManyCrossings):
        bracket(plain_weave_2x2(), budget=3)
    with pytest.raises(TooManyCrossings):
        bracket_by_skein(plain_weave_2x2(), budget=3)


def test_parallel_bracket_matches_serial():
    d = plain_weave_2x2()
    assert bracket(d, parallel=4) == bracket(d)


def test_writhe_of_alternating_plain_weave_vanishes():
    d = plain_weave_2x2()
    assert writhe(d) == 0
    assert all(v == 0 for v in writhe_per_component(d).values())


def test_positive_curl_adds_one_to_writhe():
    d = plain_weave_2x2()
    d_plus = apply_move(d, Move("R1_add", (0, 1)))
    assert writhe(d_plus) == 1
    per = writhe_per_component(d_plus)
    assert sorted(per.values()) == [0, 0, 0, 1]


def test_writhe_decomposition():
    d = apply_move(plain_weave_2x2(), Move("R1_add", (2, -1)))
    signs = crossing_signs(d)
    per = writhe_per_component(d)
    inter = {k: v for k, v in linking_matrix(d).items()}
    assert writhe(d) == sum(per.values()) + sum(inter.values())
    assert sum(signs.values()) == writhe(d)


def test_linking_numbers_on_plain_weave():
    d = plain_weave_2x2()
    # perpendicular threads cross exactly once; parallel threads never
    m = linking_matrix(d)
    assert m[(0, 3)] == 0 and m[(1, 2)] == 0
    assert abs(m[(0, 1)]) == 1 and abs(m[(2, 3)]) == 1
    assert linking_number(d, 0, 1, halved=True) * 2 == m[(0, 1)]
    with pytest.raises(Exception):
        linking_number(d, 1, 1)


def test_kauffman_f_equals_bracket_at_writhe_zero():
    d = plain_weave_2x2()
    assert kauffman_f(d) == bracket(d)


def test_kauffman_f_invariant_under_curls():
    d = plain_weave_2x2()
    for chirality in (1, -1):
        curled = apply_move(d, Move("R1_add", (0, chirality)))
        assert bracket(curled) == bracket(d).scaled(3 * chirality, -1)
        assert kauffman_f(curled) == kauffman_f(d)


def test_jones_is_quarter_substitution():
    d = plain_weave_2x2()
    f = kauffman_f(d)
    v = jones(d)
    assert v.variable == "q"
    for key in f.keys():
        assert v.part(key) == {-e: c for e, c in f.part(key).items()}


def test_degree_stats_on_alternating_builds():
    d = plain_weave_2x2()
    st = degree_stats(d)
    C = 4
    assert st == {"maxdeg": 6, "mindeg": -6, "span": 12, "W": 2, "B": 2}
    assert st["maxdeg"] == C + 2 * st["W"] - 2
    assert st["mindeg"] == -C - 2 * st["B"] + 2
    assert st["span"] == 4 * C - 4
    assert st["W"] == state_loop_count(d, "A")
    assert st["B"] == state_loop_count(d, "B")


def test_checkerboard_fails_on_non_alternating():
    with pytest.raises(NotCheckerboardColorable):
        checkerboard_coloring(twill_4x4())


def test_non_alternating_span_bounded():
    d = twill_4x4()
    assert bracket(d).span() <= 4 * 16 - 4


def test_adequacy():
    assert adequacy(plain_weave_2x2()) == {"plus": True, "minus": True}
    assert adequacy(torus_curl()) == {"plus": False, "minus": False}
    curled = apply_move(plain_weave_2x2(), Move("R1_add", (0, 1)))
    adeq = adequacy(curled)
    assert not (adeq["plus"] and adeq["minus"])


def test_degree_bounds_check():
    rep = degree_bounds_check(plain_weave_2x2())
    assert rep["max_ok"] and rep["min_ok"]
    assert rep["max_tight"] and rep["min_tight"]
    loop = degree_bounds_check(single_loop(()))
    assert loop["maxdeg"] == loop["mindeg"] == 0
    assert loop["max_tight"] and loop["min_tight"]


def test_r_parallel_identity():
    d = plain_weave_2x2()
    assert r_parallel(d, 1) is d


def test_r_parallel_counts_and_validity():
    d = plain_weave_2x2()
    d2 = r_parallel(d, 2)
    assert len(d2.crossings) == 16
    assert d2.validate().ok
    assert len(d2.threads()) == 2 * len(d.threads())
    assert sorted(t.homology for t in d2.threads()) == sorted(
        t.homology for t in d.threads() for _ in range(2)
    )


def test_r_parallel_writhe_scales_quadratically():
    base = apply_move(plain_weave_2x2(), Move("R1_add", (0, 1)))
    for r in (2, 3):
        assert writhe(r_parallel(base, r)) == r * r * writhe(base)


def test_r_parallel_preserves_adequacy():
    d = plain_weave_2x2()
    for r in (2, 3):
        assert adequacy(r_parallel(d, r)) == {"plus": True, "minus": True}


def test_bracket_format_key():
    assert format_key(()) == "<>"
    assert format_key(((0, 1), (0, 1), (1, 0))) == "<(0,1)^2 (1,0)^1>"


def test_full_winding_multiset_matches_bracket_keys():
    d = torus_curl()
    assert full_winding_multiset(d) == ((1, -1), (1, 1))
