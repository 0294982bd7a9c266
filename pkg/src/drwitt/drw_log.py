"""The log de Rham-Witt complex of Z_(p) with the log structure generated by p.

Degree 1 gains ``Z/p^n . dlog[p]_n``.  Everything is driven by one table,
the products ``V^i(1) · dlog[p]_n``.  Row ``i = 1`` is fixed by the log relation
``[p] dlog[p] = d[p]``; the remaining rows follow from ``V(x) y = V(x F(y))``
and ``F dlog = dlog``, which give ``V^i(1) dlog_n = V(V^{i-1}(1) dlog_{n-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .drw_base import (
    DrwElement,
    drw_d,
    drw_F,
    drw_iota,
    drw_mul,
    drw_R,
    drw_V,
    lambda_teichmuller,
)
from .witt_core import teichmuller_coeffs


class SingularSystem(ArithmeticError):
    pass


@dataclass(frozen=True)
class LogCoefficients:
    """Solution of the triangular system for the ``V(1) dlog[2]`` row."""

    integers: tuple       # exact integer solution of the lifted system
    moduli: tuple         # 2, 4, ..., 2^jmax
    residues: tuple       # least non-negative representatives
    balanced: tuple       # representatives in (-2^(k-1), 2^(k-1)]
    rhs: tuple            # the lifted right-hand side

    def to_json(self) -> dict:
        return {
            "p": 2,
            "jmax": len(self.moduli),
            "moduli": list(self.moduli),
            "residues": list(self.residues),
            "balanced": list(self.balanced),
            "integer_solution": list(self.integers),
            "rhs": list(self.rhs),
        }


def _balanced(x: int, m: int) -> int:
    r = x % m
    return r - m if r > m // 2 else r


def original_system(jmax: int) -> tuple[list[list[int]], list[int]]:
    """``B_jk = 2^(2^j - 1) - 2^(2^(j-k) - 1)`` and ``c_j`` = basis coefficients of ``[2]``."""
    c = teichmuller_coeffs(2, jmax + 1, 2)
    B = [[2 ** (2 ** j - 1) - 2 ** (2 ** (j - k) - 1) if k <= j else 0 for k in range(1, jmax + 1)]
         for j in range(1, jmax + 1)]
    return B, list(c[1:])


def solve_log_coefficients(jmax: int, p: int = 2) -> LogCoefficients:
    """Solve ``sum_k B_jk a_k = c_j (mod 2^j)`` for ``j <= jmax``.

    Modulo 2^j the first term of ``B_jk`` dies, so the integer system with
    ``b_jk = -2^(2^(j-k) - 1)`` and the balanced residues of ``c_j`` is solved by
    forward substitution and then reduced.
    """
    if p != 2:
        raise ValueError("the coefficient system only exists for p = 2")
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    _, c = original_system(jmax)
    rhs = tuple(_balanced(cj, 2 ** j) for j, cj in enumerate(c, start=1))
    a: list[int] = []
    for j in range(1, jmax + 1):
        acc = rhs[j - 1]
        for k in range(1, j):
            acc -= -(2 ** (2 ** (j - k) - 1)) * a[k - 1]
        diag = -(2 ** (2 ** 0 - 1))
        if diag == 0:
            raise SingularSystem(f"zero pivot in row {j}")
        q, r = divmod(acc, diag)
        if r:
            raise SingularSystem(f"row {j} has no integral solution")
        a.append(q)
    moduli = tuple(2 ** k for k in range(1, jmax + 1))
    residues = tuple(x % m for x, m in zip(a, moduli))
    sol = LogCoefficients(
        integers=tuple(a),
        moduli=moduli,
        residues=residues,
        balanced=tuple(_balanced(x, m) for x, m in zip(a, moduli)),
        rhs=rhs,
    )
    B, c = original_system(jmax)
    for j in range(1, jmax + 1):
        lhs = sum(B[j - 1][k - 1] * residues[k - 1] for k in range(1, j + 1))
        assert (lhs - c[j - 1]) % 2 ** j == 0, f"row {j} of the coefficient system fails"
    return sol


def brute_force_log_coefficients(jmax: int) -> tuple:
    """Search each ``a_j`` in ``Z/2^j`` so that ``[2] dlog = d[2]`` holds at level ``j+1``.

    Independent of :func:`solve_log_coefficients`: it only uses the base product
    table and the ``V(x)y = V(xF(y))`` recursion, with row 1 as the unknown.
    """
    found: list[int] = []
    for j in range(1, jmax + 1):
        n = j + 1
        hits = [a for a in range(2 ** j) if _log_relation_holds(2, n, tuple(found) + (a,))]
        if len(hits) != 1:
            raise SingularSystem(f"a_{j} is not unique: {hits}")
        found.append(hits[0])
    return tuple(found)


def _candidate_row(p: int, n: int, i: int, a: tuple, cache: dict) -> tuple:
    """``V^i(1) dlog_n`` as ``(deg1, dlog)`` when row 1 is ``2 dlog + sum a_k dV^k``."""
    key = (n, i)
    if key in cache:
        return cache[key]
    if i == 0:
        out = ((0,) * (n - 1), 1)
    elif i == 1:
        out = (tuple(a[k] % 2 ** (k + 1) for k in range(n - 1)), 2)
    else:
        deg1, dl = _candidate_row(p, n - 1, i - 1, a, cache)
        shifted = [0] + [p * e for e in deg1]
        r1, rl = _candidate_row(p, n, 1, a, cache)
        out = (
            tuple((s + dl * t) % p ** (k + 1) for k, (s, t) in enumerate(zip(shifted, r1))),
            dl * rl % p ** n,
        )
    cache[key] = out
    return out


def _log_relation_holds(p: int, n: int, a: tuple) -> bool:
    cache: dict = {}
    c = teichmuller_coeffs(p, n, p)
    acc = [0] * (n - 1)
    dl = 0
    for i, ci in enumerate(c):
        deg1, rl = _candidate_row(p, n, i, a, cache)
        for k, e in enumerate(deg1):
            acc[k] += ci * e
        dl += ci * rl
    rhs = [c[k] for k in range(1, n)]
    return dl % p ** n == 0 and all((x - y) % p ** (k + 1) == 0 for k, (x, y) in enumerate(zip(acc, rhs)))


# ---------------------------------------------------------------- tables


@lru_cache(maxsize=None)
def _row_one(p: int, n: int) -> tuple:
    """``V(1) dlog[p]_n`` as ``(deg1, dlog)``; needs n >= 2."""
    deg1 = [0] * (n - 1)
    if p == 2:
        sol = solve_log_coefficients(n - 1)
        for k, r in enumerate(sol.residues):
            deg1[k] = r
    else:
        deg1[0] = 1
        if p == 3 and n >= 3:
            deg1[1] = 3
    return tuple(deg1), p % p ** n


@lru_cache(maxsize=None)
def v_times_dlog(p: int, n: int, i: int) -> tuple:
    """``V^i(1) · dlog[p]_n`` as ``(deg1 coefficients, dlog coefficient)``."""
    if i == 0:
        return (0,) * (n - 1), 1 % p ** n
    if i == 1:
        return _row_one(p, n)
    deg1, dl = v_times_dlog(p, n - 1, i - 1)
    prev = DrwElement._raw(p, n - 1, (0,) * (n - 1), deg1, dl, True)
    out = drw_V(prev)
    return out.deg1, out.dlog


@lru_cache(maxsize=None)
def v_of_dlog(p: int, n: int) -> DrwElement:
    """``V(dlog[p]_n)`` at level n+1, equal to ``V(1) dlog[p]_{n+1}``."""
    deg1, dl = _row_one(p, n + 1)
    return DrwElement._raw(p, n + 1, (0,) * (n + 1), deg1, dl, True)


def closed_form_row(p: int, n: int, i: int) -> DrwElement | None:
    """Closed forms for ``V^i(1) dlog[p]_n``; ``None`` where none is given.

    p >= 5: ``p^i dlog + p^(i-1) dV^i``; p = 3: add ``3^i dV^(i+1)``;
    p = 2, i >= 2: ``2^i dlog - 2^(i-1) dV^(i+1) + 2^(i+1) dV^(i+2)``.
    """
    if not 1 <= i < n:
        return None
    deg1 = [0] * (n - 1)

    def put(k, c):
        if 1 <= k < n:
            deg1[k - 1] += c

    if p == 2:
        if i < 2:
            return None
        put(i + 1, -(2 ** (i - 1)))
        put(i + 2, 2 ** (i + 1))
    else:
        put(i, p ** (i - 1))
        if p == 3:
            put(i + 1, 3 ** i)
    return DrwElement(p, n, deg1=deg1, dlog=p ** i, log=True)


def general_display_row(n: int, i: int) -> DrwElement:
    """The i-general p = 2 display evaluated at any i (it is wrong at i = 1)."""
    deg1 = [0] * (n - 1)
    for k, c in ((i + 1, -(2 ** (i - 1))), (i + 2, 2 ** (i + 1))):
        if 1 <= k < n:
            deg1[k - 1] += c
    return DrwElement(2, n, deg1=deg1, dlog=2 ** i, log=True)


def dlog_torsion_order(p: int, n: int) -> int:
    """Additive order of ``dlog[p]_n``, computed by repeated multiplication by p."""
    x = DrwElement.dlog_gen(p, n)
    order = 1
    while not x.is_zero():
        x = x.scale(p)
        order *= p
    return order


def log_relation(p: int, n: int) -> tuple[DrwElement, DrwElement]:
    """Both sides of ``[p]_n dlog[p]_n = d[p]_n``."""
    tp = lambda_teichmuller(p, n, p, log=True)
    return tp * DrwElement.dlog_gen(p, n), tp.d()


# thin wrappers with the log-specific names
def log_mul(x: DrwElement, y: DrwElement) -> DrwElement:
    return drw_mul(x, y)


def log_V(x: DrwElement) -> DrwElement:
    return drw_V(x)


def log_F(x: DrwElement) -> DrwElement:
    return drw_F(x)


def log_d(x: DrwElement) -> DrwElement:
    return drw_d(x)


def log_R(x: DrwElement) -> DrwElement:
    return drw_R(x)


def log_iota(x: DrwElement) -> DrwElement:
    return drw_iota(x)
