"""Alternative readings of a few P(E) formulas, for p = 2.

Each function evaluates a formula exactly as it reads on its face, so the
test-suite can show where it parts ways with the implemented version (which is
itself pinned to the reference engine and the Witt-complex relations).
"""

from __future__ import annotations

from fractions import Fraction

from .drw_base import DrwElement
from .drw_poly import PolyDrwElement, _Acc, _Fpow, _Vpow, _sign
from .witt_core import valuation


def v_of_type2_odd(b: DrwElement, k: int, deg_b: int) -> PolyDrwElement:
    """``V(b[X]^(k-1)d[X]) = (-1)^|b| (1/k) V(db[X]^k) - (-1)^|b| (2/k) dV(b[X]^k)``, k odd."""
    assert k % 2 == 1
    acc = _Acc(2, b.n + 1, deg_b + 1)
    sg = _sign(deg_b)
    acc.add(3, (1, k), b.d(), sg * Fraction(1, k))
    acc.add(4, (1, k), b, -sg * Fraction(2, k))
    return acc.build()


def p34_r_below_s(c, r, l, deg_c, e, s, m, deg_e) -> PolyDrwElement:
    """``V^r(c[X]^l) dV^s(e[X]^m)`` for r < s, keeping only the dV^s term."""
    n = e.n + s
    N = 2 ** (s - r) * l + m
    acc = _Acc(2, n, deg_c + deg_e + 1)
    acc.add(4, (s, N), _Fpow(c, s - r) * e, _sign(deg_c) * Fraction(2 ** r * m, N))
    return acc.build()


def p34_equal_small_v(c, r, l, deg_c, e, m, deg_e) -> PolyDrwElement:
    """The r = s, v < r case with the middle term read as ``dV^r(ce [X]^((l+m)/2^v))``."""
    n = e.n + r
    K = l + m
    v = valuation(K, 2)
    assert v < r
    Kp = K // 2 ** v
    acc = _Acc(2, n, deg_c + deg_e + 1)
    acc.v_of_type1(r, c * (e.d() + e.iota()), K)
    sg = _sign(deg_c)
    ce = c * e
    acc.add(4, (r, Kp), ce, sg * Fraction(2 ** r * m, K))
    acc.add(3, (r - v, Kp), _Vpow(ce, v).d(), -sg * Fraction(2 ** v * m, K))
    return acc.build()


def p34_equal_small_v_consistent(c, r, l, deg_c, e, m, deg_e) -> PolyDrwElement:
    """Same case with the middle term read as ``dV^(r-v)(V^v(ce) [X]^((l+m)/2^v))``."""
    n = e.n + r
    K = l + m
    v = valuation(K, 2)
    Kp = K // 2 ** v
    acc = _Acc(2, n, deg_c + deg_e + 1)
    acc.v_of_type1(r, c * (e.d() + e.iota()), K)
    sg = _sign(deg_c)
    ce = c * e
    acc.add(4, (r - v, Kp), _Vpow(ce, v), sg * Fraction(2 ** r * m, K))
    acc.add(3, (r - v, Kp), _Vpow(ce, v).d(), -sg * Fraction(2 ** v * m, K))
    return acc.build()


def p44_s_below(e, s, m, deg_e, e2, s2, m2, deg_e2) -> PolyDrwElement:
    """``dV^s(e[X]^m) dV^s'(e'[X]^m')`` for s < s', read term by term."""
    n = e2.n + s2
    t = s2 - s
    N = 2 ** t * m + m2
    q = deg_e + deg_e2 + 2
    acc = _Acc(2, n, q)
    inner = _Fpow(e.d() + e.iota(), t) * e2 + (_Fpow(e, t) * e2).d().scale(Fraction(m, N))
    acc.add(4, (s2, N), inner, -_sign(deg_e))
    acc.add(3, (s2, N), _Fpow(e.d(), t) * e2.iota() + _Fpow(e, t) * e2.iota().d())
    return acc.build()
