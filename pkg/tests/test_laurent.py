import pytest
from hypothesis import given, strategies as st

from weavekit import laurent
from weavekit.laurent import LOOP_FACTOR


def polys():
    return st.dictionaries(
        st.integers(-6, 6), st.integers(-9, 9).filter(bool), max_size=6
    )


def test_basic_arithmetic():
    p = laurent.poly({2: 1, 0: -1})
    q = laurent.poly({-2: 3})
    assert laurent.add(p, q) == {2: 1, 0: -1, -2: 3}
    assert laurent.mul(p, q) == {0: 3, -2: -3}
    assert laurent.sub(p, p) == {}
    assert laurent.power(q, 2) == {-4: 9}


def test_zero_coefficients_are_dropped():
    assert laurent.poly({3: 0}) == {}
    assert laurent.add({1: 2}, {1: -2}) == {}


def test_degrees_and_span():
    p = {4: 1, -2: 5}
    assert laurent.max_degree(p) == 4
    assert laurent.min_degree(p) == -2
    assert laurent.span(p) == 6
    with pytest.raises(ValueError):
        laurent.max_degree({})


def test_loop_factor_divides_its_powers():
    d3 = laurent.power(LOOP_FACTOR, 3)
    quo, rem = laurent.divmod_single(d3, LOOP_FACTOR)
    assert rem == {}
    assert quo == laurent.power(LOOP_FACTOR, 2)


def test_division_detects_non_multiples():
    assert not laurent.divides(LOOP_FACTOR, {1: 1})
    assert laurent.divides(LOOP_FACTOR, {})
    with pytest.raises(ValueError):
        laurent.exact_div({1: 1}, LOOP_FACTOR)


@given(polys(), polys())
def test_mul_commutes(p, q):
    assert laurent.mul(p, q) == laurent.mul(q, p)


@given(polys(), polys(), polys())
def test_mul_distributes(p, q, r):
    left = laurent.mul(p, laurent.add(q, r))
    right = laurent.add(laurent.mul(p, q), laurent.mul(p, r))
    assert left == right


@given(polys())
def test_exact_division_roundtrip(p):
    prod = laurent.mul(p, LOOP_FACTOR)
    assert laurent.exact_div(prod, LOOP_FACTOR) == laurent.poly(p)


@given(polys())
def test_format_parse_roundtrip(p):
    text = laurent.format_poly(laurent.poly(p))
    assert laurent.parse_poly(text) == laurent.poly(p)


def test_format_is_canonical():
    assert laurent.format_poly({0: 1}) == "1A^0"
    assert laurent.format_poly({2: -1, -2: 3}) == "-1A^2 + 3A^-2"
    assert laurent.format_poly({}) == "0"
