"""The eight acceptance criteria, each exact (no tolerance) and time-boxed.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for a
plain pass/fail listing.
"""

from __future__ import annotations

import functools
import random
import subprocess
import sys
import time
from pathlib import Path

from drwitt.drw_base import (
    DrwElement,
    check_axioms,
    filtration_check,
    lambda_teichmuller,
    pd_failure_check,
)
from drwitt.drw_log import dlog_torsion_order, log_relation, solve_log_coefficients
from drwitt.drw_poly import check_associativity, check_poly_witt_axioms, poly_ghost, poly_lambda
from drwitt.polynomial import SparsePoly
from drwitt.witt_core import (
    WittVector,
    ghost,
    integrality_congruence,
    square_roots_of_unity,
    teichmuller,
    teichmuller_coeffs,
    v_basis_compose,
    v_basis_decompose,
    verschiebung,
    witt_one,
    witt_zero,
)

GOLDEN = Path(__file__).parent / "golden"
ACCEPTANCE_RESULTS: list[str] = []


def criterion(number: int, title: str, limit: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            try:
                fn()
                elapsed = time.perf_counter() - start
                assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
            except BaseException as exc:
                elapsed = time.perf_counter() - start
                ACCEPTANCE_RESULTS.append(f"criterion {number} FAIL  {title} ({elapsed:.2f} s): {exc}")
                raise
            ACCEPTANCE_RESULTS.append(f"criterion {number} PASS  {title} ({elapsed:.2f} s < {limit} s)")

        return run

    return wrap


def _assert_report(report):
    assert report.ok, report.to_text()


# 1 ---------------------------------------------------------------------------


@criterion(1, "Witt identities: [-1] formula, square roots of unity", 1.0)
def test_criterion_1_witt_identities():
    p = 2
    for n in range(1, 7):
        tail = verschiebung(witt_one(p, n - 1)) if n > 1 else witt_zero(p, 1)
        assert teichmuller(-1, n, p) == -witt_one(p, n) + tail, n
        assert v_basis_decompose(teichmuller(-1, n, p)) == (-1,) + ((1,) if n > 1 else ()) + (0,) * max(n - 2, 0)
    for n in range(1, 6):
        listed = [teichmuller(1, n), teichmuller(-1, n), -teichmuller(1, n), -teichmuller(-1, n)]
        roots = square_roots_of_unity(n)
        assert set(roots) == set(listed), n
        for w in listed:
            assert w * w == witt_one(p, n), (n, w)


# 2 ---------------------------------------------------------------------------


@criterion(2, "V-basis round trip, Teichmuller coefficients, integrality congruence", 5.0)
def test_criterion_2_basis_and_teichmuller():
    rng = random.Random(2)
    for _ in range(500):
        p = rng.choice((2, 3, 5))
        n = rng.randint(1, 6)
        w = WittVector(p, tuple(rng.randint(-50, 50) for _ in range(n)))
        coeffs = v_basis_decompose(w)
        assert all(isinstance(c, int) for c in coeffs)
        assert v_basis_compose(coeffs, p) == w
    for p in (2, 3, 5):
        for n in range(1, 7):
            for a in range(-30, 31):
                c = teichmuller_coeffs(a, n, p)
                assert all(isinstance(x, int) for x in c)
                assert ghost(v_basis_compose(c, p)).entries == tuple(a ** (p ** i) for i in range(n))
                assert integrality_congruence(a, n, p), (a, n, p)


# 3 ---------------------------------------------------------------------------


@criterion(3, "base complex axiom suite, p in {2,3,5}, n <= 6", 10.0)
def test_criterion_3_base_axioms():
    for p in (2, 3, 5):
        report = check_axioms(p, 6, seed=0)
        _assert_report(report)
        names = {r.name for r in report.relations}
        for required in ("Vd = p dV", "dF = p Fd", "V(x)dV(y) = V(xdy) + iota V(xy)", "iota^2 = 0",
                         "Fd lambda[a] = lambda[a]^(p-1) d lambda[a]", "FdV = d + iota", "FV = p"):
            assert required in names, required
        if p == 2:
            assert "iota[1] = sum 2^(s-1) dV^s(1)" in names


# 4 ---------------------------------------------------------------------------


@criterion(4, "Fil^s = ker R^(n-s) for 1 <= s < n <= 6", 1.0)
def test_criterion_4_filtration():
    for p in (2, 3, 5):
        for n in range(2, 7):
            for s in range(1, n):
                _assert_report(filtration_check(p, n, s))


# 5 ---------------------------------------------------------------------------


@criterion(5, "PD-failure identity on 200 random tau, n <= 5", 5.0)
def test_criterion_5_pd_failure():
    for n in range(2, 6):
        report = pd_failure_check(2, n, count=200, seed=n)
        _assert_report(report)
        assert sum(r.checked for r in report.relations) >= 200


# 6 ---------------------------------------------------------------------------


@criterion(6, "log suite: dlog order, [p]dlog = d[p], coefficients, V/F tables", 5.0)
def test_criterion_6_log():
    for p in (2, 3, 5):
        for n in range(1, 7):
            g = DrwElement.dlog_gen(p, n)
            assert dlog_torsion_order(p, n) == p ** n
            assert g.scale(p ** n).is_zero() and not g.scale(p ** (n - 1)).is_zero()
            lhs, rhs = log_relation(p, n)
            assert lhs == rhs, (p, n)
            assert g.V().F() == g.scale(p)
            assert g.F().V() == DrwElement.v(p, n, 1, True) * DrwElement.dlog_gen(p, n) if n >= 2 else True
            for i in range(1, n):
                row = DrwElement.v(p, n, i, True) * g
                prev = DrwElement.v(p, n - 1, i - 1, True) * DrwElement.dlog_gen(p, n - 1)
                assert row.F() == prev.scale(p), (p, n, i)
                assert row == prev.V(), (p, n, i)
    sol = solve_log_coefficients(6)
    assert sol.residues == (1, 3, 4, 0, 0, 0)
    assert sol.balanced == (1, -1, 4, 0, 0, 0)
    assert sol.moduli == (2, 4, 8, 16, 32, 64)


# 7 ---------------------------------------------------------------------------


def _random_poly_witt(rng, p, n):
    return WittVector(p, tuple(
        SparsePoly({e: rng.randint(-3, 3) for e in range(rng.randint(0, 3) + 1)}) for _ in range(n)
    ))


@criterion(7, "polynomial extension: axioms, associativity sweep, lambda homomorphism", 120.0)
def test_criterion_7_polynomial_extension():
    _assert_report(check_poly_witt_axioms(2, 4, fuel=4, seed=0))
    sweep = check_associativity(2, 4, fuel=200, seed=0)
    _assert_report(sweep)
    assert len(sweep.relations) == 80
    labels = {r.name for r in sweep.relations}
    assert sum(1 for name in labels if name.startswith("A3.3.4 ")) == 13
    assert "A3.3.4 s<r'<r" in labels
    assert all(r.checked >= 200 for r in sweep.relations)
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 3)
        u, v = _random_poly_witt(rng, 2, n), _random_poly_witt(rng, 2, n)
        lu, lv = poly_lambda(u), poly_lambda(v)
        assert poly_ghost(lu) == ghost(u).entries
        assert poly_lambda(u + v) == lu + lv
        assert poly_lambda(u * v) == lu * lv
        assert poly_ghost(lu * lv) == ghost(u * v).entries


# 8 ---------------------------------------------------------------------------

GOLDEN_CASES = {
    "table_groups_p2_n3.txt": ["table", "groups", "--p", "2", "--n", "3"],
    "table_groups_p2_n3_log.txt": ["table", "groups", "--p", "2", "--n", "3", "--log"],
    "table_groups_p2_n1.txt": ["table", "groups", "--p", "2", "--n", "1"],
    "witt_decompose_p2_n3.txt": ["witt", "decompose", "--p", "2", "--n", "3", "--", "-1", "0", "0"],
    "check_logcoeffs_jmax6.txt": ["check", "logcoeffs", "--jmax", "6"],
    "check_logcoeffs_jmax6.json": ["check", "logcoeffs", "--jmax", "6", "--json"],
}


def _cli(args) -> bytes:
    proc = subprocess.run([sys.executable, "-m", "drwitt", *args], capture_output=True, check=True)
    return proc.stdout


@criterion(8, "CLI golden files, byte-identical across runs", 60.0)
def test_criterion_8_cli_golden():
    for name, args in GOLDEN_CASES.items():
        first, second = _cli(args), _cli(args)
        assert first == second, name
        assert first == (GOLDEN / name).read_bytes(), name


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except BaseException:
            failed += 1
    print("\n".join(ACCEPTANCE_RESULTS))
    sys.exit(1 if failed else 0)
