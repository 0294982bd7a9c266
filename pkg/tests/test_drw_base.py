import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from drwitt.drw_base import (
    DrwElement,
    MixedDegree,
    check_axioms,
    eta,
    filtration_check,
    group_structure,
    iota_of_v,
    lambda_from_witt,
    lambda_teichmuller,
    pd_failure_check,
    random_element,
    witt_from_lambda,
)
from drwitt.witt_core import WittVector, teichmuller

E = DrwElement


def test_v_times_dv_example():
    assert E.v(2, 4, 1) * E.dv(2, 4, 2) == E(2, 4, deg1=[0, 2, 4])


def test_iota_of_one_is_the_sum_of_dv():
    assert lambda_teichmuller(1, 3).iota() == E(2, 3, deg1=[1, 2])
    for n in range(1, 7):
        assert E.one(2, n).iota() == E(2, n, deg1=[2 ** (s - 1) for s in range(1, n)])


def test_iota_vanishes_for_odd_primes():
    for p in (3, 5):
        assert iota_of_v(p, 4, 0) == (0, 0, 0)
        assert eta(p, 4).is_zero()


def test_f_of_dv():
    # F(dV(1)) = d(1) + iota(1) = iota(1) at level n-1
    assert E.dv(2, 3, 1).F() == E(2, 2, deg1=[1])


def test_torsion_orders():
    for n in range(2, 6):
        for i in range(1, n):
            g = E.dv(2, n, i)
            assert g.scale(2 ** i).is_zero()
            assert not g.scale(2 ** (i - 1)).is_zero()


def test_fraction_scalars_act_on_torsion():
    g = E.dv(2, 3, 2)
    assert g.scale(Fraction(1, 3)) == g.scale(3)
    with pytest.raises(ValueError):
        g.scale(Fraction(1, 2))


def test_degree_and_mixed():
    assert E.one(2, 3).degree == 0
    assert E.dv(2, 3, 1).degree == 1
    assert E.zero(2, 3).degree is None
    with pytest.raises(MixedDegree):
        _ = (E.one(2, 3) + E.dv(2, 3, 1)).degree


def test_lambda_round_trip():
    w = WittVector(2, (3, -1, 4))
    assert witt_from_lambda(lambda_from_witt(w)) == w
    assert lambda_from_witt(teichmuller(-1, 3)) == E(2, 3, deg0=[-1, 1, 0])


def test_group_structure():
    gs = group_structure(2, 3, log=True)
    assert gs["deg0"]["rank"] == 3
    assert gs["deg1"]["torsion"] == [2, 4, 8]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("log", [False, True])
def test_axiom_suite(p, log):
    report = check_axioms(p, 4, seed=11, log=log)
    assert report.ok, report.to_text()


def test_filtration_and_pd():
    assert filtration_check(2, 4, 2, log=True).ok
    assert pd_failure_check(2, 3, count=20, seed=3).ok


@st.composite
def elements(draw, log=False):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(2, 5))
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    qs = [draw(st.integers(0, 1)) for _ in range(3)]
    return [random_element(rng, p, n, q, log=log) for q in qs], qs


def _sign(q):
    return -1 if q % 2 else 1


@given(elements())
def test_graded_ring_laws(data):
    (x, y, z), (qx, qy, qz) = data
    assert x * y == y * x * _sign(qx * qy)
    assert (x * y) * z == x * (y * z)
    assert (x * y).d() == x.d() * y + x * y.d() * _sign(qx)


@given(elements(log=True))
def test_log_operator_laws(data):
    (x, y, _), _ = data
    p = x.p
    assert x.V().F() == x.scale(p)
    assert x.V().d().F() == x.d() + x.iota()
    assert (x * y).F() == x.F() * y.F()
    assert (x * y).R() == x.R() * y.R()


def _sum_dv(n, lo, hi):
    deg1 = [0] * (n - 1)
    for s in range(lo, hi + 1):
        if 1 <= s < n:
            deg1[s - 1] += 2 ** (s - 1)
    return deg1


def test_iota_table_readings():
    # upper limit n-1 is the implemented table; stopping at n-2 drops a live term
    for n in range(2, 7):
        for i in range(n):
            x = E.v(2, n, i)
            assert x.iota() == E(2, n, deg1=_sum_dv(n, i + 1, n - 1))
            assert x.iota() == eta(2, n) * x
            short = E(2, n, deg1=_sum_dv(n, i + 1, n - 2))
            if i + 1 <= n - 1:
                assert short != x.iota()


def test_f_of_dv_table_readings():
    # both readings agree once the out-of-range dV^(n-1) at level n-1 is dropped
    for n in range(2, 7):
        for i in range(1, n):
            got = E.dv(2, n, i).F()
            first = _sum_dv(n - 1, i, n - 2)
            second = _sum_dv(n - 1, i, n - 1)
            if i >= 2:
                first[i - 2] += 1
                second[i - 2] += 1
            assert got == E(2, n - 1, deg1=first) == E(2, n - 1, deg1=second)
