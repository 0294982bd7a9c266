import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from drwitt import formats as fmt
from drwitt.drw_base import DrwElement, random_element
from drwitt.drw_poly import PolyDrwElement
from drwitt.polynomial import SparsePoly, format_poly, parse_poly
from drwitt.witt_core import WittVector


def test_witt_text():
    w = WittVector(2, (-1, 0, 0))
    assert fmt.witt_to_text(w) == "W{p=2,n=3}[(-1),(0),(0)]"
    assert fmt.parse_witt(fmt.witt_to_text(w)) == w
    wx = WittVector(2, (SparsePoly.X() + 1, SparsePoly.const(0)))
    assert fmt.parse_witt(fmt.witt_to_text(wx)) == wx
    assert fmt.witt_from_json(fmt.witt_to_json(wx)) == wx


def test_decomposition_text():
    assert fmt.decomposition_to_text((-1, 1, 0)) == "-1·[1] + 1·V(1)"
    assert fmt.decomposition_to_text((2, -3, 0)) == "2·[1] - 3·V(1)"
    assert fmt.decomposition_to_text((0, 0)) == "0"


def test_drw_text():
    x = DrwElement(2, 4, deg0=[0, 0, 3, 0], deg1=[1, 2, 0])
    assert fmt.drw_to_text(x) == "3·V^2(1) + dV(1) + 2·dV^2(1) @ {p=2, n=4}"
    y = DrwElement(2, 4, deg1=[1, 2, 0])
    assert fmt.drw_to_text(y) == "dV(1) + 2·dV^2(1) @ {p=2, n=4}"
    assert fmt.parse_drw("2*V(1) - [1]", 3, 2) == DrwElement(3, 2, deg0=[-1, 2])
    with pytest.raises(ValueError):
        fmt.parse_drw("dV^4(1)", 2, 3)
    with pytest.raises(ValueError):
        fmt.parse_drw("dlog[2]", 2, 3)


def test_poly_text_shape():
    e = DrwElement(2, 3, deg1=[1, 0])
    x = PolyDrwElement(2, 4, 1, t4={(1, 1): DrwElement.one(2, 3)})
    assert fmt.poly_to_text(x) == "dV([1]·[X]^1) @ {p=2, n=4, q=1}"
    y = PolyDrwElement(2, 4, 1, t1={3: DrwElement(2, 4, deg1=[1, 2, 0])}, t3={(1, 5): e})
    text = fmt.poly_to_text(y)
    assert text == "(dV(1) + 2·dV^2(1))·[X]^3 + V(dV(1)·[X]^5) @ {p=2, n=4, q=1}"
    assert fmt.parse_poly_drw(text) == y
    assert fmt.parse_poly_drw("V^2([1]*[X]^5)", 2, 4, 0) == PolyDrwElement.type3(2, 5, DrwElement.one(2, 2))


def test_poly_negative_coefficient_is_parenthesised():
    x = PolyDrwElement.type1(2, DrwElement(2, 3, deg0=[-2, 0, 0]))
    assert fmt.poly_to_text(x) == "(-2·[1])·[X]^2 @ {p=2, n=3, q=0}"
    assert fmt.parse_poly_drw(fmt.poly_to_text(x)) == x


@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(0, 1), st.booleans(), st.integers(0, 10 ** 6))
def test_drw_round_trips(p, n, q, log, seed):
    x = random_element(random.Random(seed), p, n, q, log=log)
    assert fmt.parse_drw(fmt.drw_to_text(x)) == x
    assert fmt.drw_from_json(fmt.drw_to_json(x)) == x


@given(st.dictionaries(st.integers(0, 9), st.fractions(max_denominator=7), max_size=5))
def test_poly_round_trip(terms):
    f = SparsePoly(terms)
    assert parse_poly(format_poly(f)) == f


def test_scalar_json():
    assert fmt.scalar_from_json(fmt.scalar_to_json(Fraction(-2, 3))) == Fraction(-2, 3)
    with pytest.raises(ValueError):
        fmt.scalar_from_json(True)
