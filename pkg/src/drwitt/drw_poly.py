"""The polynomial extension P(E) of a de Rham-Witt complex E.

An element of ``P(E)_n`` in degree q is a finite sum of four kinds of terms:

====  ==========================  ======================  ==================
type  shape                       coefficient lives in    key
====  ==========================  ======================  ==================
1     ``a [X]^j``                 ``E_n^q``               ``j >= 0``
2     ``b [X]^(k-1) d[X]``        ``E_n^(q-1)``           ``k >= 1``
3     ``V^r(c [X]^l)``            ``E_(n-r)^q``           ``(r, l)``, p ∤ l
4     ``dV^s(e [X]^m)``           ``E_(n-s)^(q-1)``       ``(s, m)``, p ∤ m
====  ==========================  ======================  ==================

Here E is the base complex of :mod:`drwitt.drw_base`, so coefficients vanish
outside degrees 0 and 1 and every element has degree ``q <= 2``.

:func:`poly_mul` uses closed forms for each pair of types.  :func:`reference_mul`
recomputes products from the operator tables alone, using only
``x V^r(u) = V^r(F^r(x) u)`` and ``x dV^s(u) = (-1)^|x| (dV^s(F^s(x) u) - V^s(F^s(dx) u))``;
it is the oracle the closed forms are tested against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator

from .drw_base import DrwElement, basis as base_basis, random_element as base_random
from .polynomial import SparsePoly
from .witt_core import (
    GhostVector,
    LengthTooShort,
    NonIntegralGhost,
    WittVector,
    ghost,
    teichmuller,
    unghost,
    v_basis_compose,
    v_basis_decompose,
    valuation,
)


class EvenDenominator(ArithmeticError):
    """A closed form produced a scalar whose denominator is divisible by p."""


class InconsistentDecomposition(ArithmeticError):
    pass


def _sign(d: int) -> int:
    return -1 if d % 2 else 1


def _frac(num: int, den: int, p: int) -> Fraction | int:
    f = Fraction(num, den)
    if f.denominator % p == 0:
        raise EvenDenominator(f"{num}/{den} is not {p}-local")
    return f.numerator if f.denominator == 1 else f


def _vp(x: int, p: int) -> float:
    return float("inf") if x == 0 else valuation(x, p)


def _Fpow(e: DrwElement, t: int) -> DrwElement:
    for _ in range(t):
        e = e.F()
    return e


def _Vpow(e: DrwElement, t: int) -> DrwElement:
    for _ in range(t):
        e = e.V()
    return e


class PolyDrwElement:
    """A homogeneous element of ``P(E)_n`` of degree q.

    ``t1``: ``{j: a}``, ``t2``: ``{k: b}``, ``t3``: ``{(r, l): c}``, ``t4``: ``{(s, m): e}``.
    The maps are never mutated after construction.
    """

    __slots__ = ("p", "n", "q", "t1", "t2", "t3", "t4", "_hash")

    def __init__(self, p: int, n: int, q: int, t1=None, t2=None, t3=None, t4=None):
        acc = _Acc(p, n, q)
        for kind, m in enumerate((t1, t2, t3, t4), start=1):
            for key, e in (m or {}).items():
                acc.add(kind, key, e)
        built = acc.build()
        built.validate()
        self._set(p, n, q, built.t1, built.t2, built.t3, built.t4)

    def _set(self, p, n, q, t1, t2, t3, t4):
        self.p, self.n, self.q = p, n, q
        self.t1, self.t2, self.t3, self.t4 = t1, t2, t3, t4
        self._hash = None

    @classmethod
    def _raw(cls, p, n, q, t1, t2, t3, t4) -> "PolyDrwElement":
        obj = cls.__new__(cls)
        obj._set(p, n, q, t1, t2, t3, t4)
        return obj

    # constructors
    @classmethod
    def zero(cls, p: int, n: int, q: int = 0) -> "PolyDrwElement":
        return cls._raw(p, n, q, {}, {}, {}, {})

    @classmethod
    def one(cls, p: int, n: int) -> "PolyDrwElement":
        return cls.type1(0, DrwElement.one(p, n))

    @classmethod
    def type1(cls, j: int, a: DrwElement, q: int | None = None) -> "PolyDrwElement":
        q = _deg_of(a, q)
        return cls(a.p, a.n, q, t1={j: a})

    @classmethod
    def type2(cls, k: int, b: DrwElement, q: int | None = None) -> "PolyDrwElement":
        q = _deg_of(b, None if q is None else q - 1) + 1
        return cls(b.p, b.n, q, t2={k: b})

    @classmethod
    def type3(cls, r: int, l: int, c: DrwElement, q: int | None = None) -> "PolyDrwElement":
        q = _deg_of(c, q)
        return cls(c.p, c.n + r, q, t3={(r, l): c})

    @classmethod
    def type4(cls, s: int, m: int, e: DrwElement, q: int | None = None) -> "PolyDrwElement":
        q = _deg_of(e, None if q is None else q - 1) + 1
        return cls(e.p, e.n + s, q, t4={(s, m): e})

    @classmethod
    def X(cls, p: int, n: int) -> "PolyDrwElement":
        return cls.type1(1, DrwElement.one(p, n))

    @classmethod
    def dX(cls, p: int, n: int) -> "PolyDrwElement":
        return cls.type2(1, DrwElement.one(p, n))

    # structure
    def validate(self):
        """Raise ``ValueError`` unless every key and coefficient is admissible."""
        p, n, q = self.p, self.n, self.q
        for j, a in self.t1.items():
            _expect(j >= 0, f"type-1 exponent {j}")
            _expect_coeff(a, p, n, q, f"[X]^{j}")
        for k, b in self.t2.items():
            _expect(k >= 1, f"type-2 index {k}")
            _expect_coeff(b, p, n, q - 1, f"[X]^{k - 1}d[X]")
        for (r, l), c in self.t3.items():
            _expect(1 <= r < n and l >= 1 and l % p != 0, f"type-3 key {(r, l)}")
            _expect_coeff(c, p, n - r, q, f"V^{r}([X]^{l})")
        for (s, m), e in self.t4.items():
            _expect(1 <= s < n and m >= 1 and m % p != 0, f"type-4 key {(s, m)}")
            _expect_coeff(e, p, n - s, q - 1, f"dV^{s}([X]^{m})")

    def is_zero(self) -> bool:
        return not (self.t1 or self.t2 or self.t3 or self.t4)

    def __bool__(self):
        return not self.is_zero()

    def terms(self) -> Iterator[tuple[int, object, DrwElement]]:
        for kind, m in enumerate((self.t1, self.t2, self.t3, self.t4), start=1):
            for key in sorted(m):
                yield kind, key, m[key]

    def generators(self) -> Iterator["PolyDrwElement"]:
        for kind, key, e in self.terms():
            yield _single(self.p, self.n, self.q, kind, key, e)

    def _check(self, other: "PolyDrwElement"):
        if other.p != self.p or other.n != self.n:
            raise ValueError(f"incompatible elements: p={self.p},n={self.n} vs p={other.p},n={other.n}")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, PolyDrwElement):
            return NotImplemented
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.q != other.q:
            raise ValueError(f"cannot add degree {self.q} and degree {other.q}")
        acc = _Acc(self.p, self.n, self.q)
        acc.add_elem(self)
        acc.add_elem(other)
        return acc.build()

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, PolyDrwElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "PolyDrwElement":
        if c == 1:
            return self
        acc = _Acc(self.p, self.n, self.q)
        acc.add_elem(self, c)
        return acc.build()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PolyDrwElement):
            return NotImplemented
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def F(self):
        return poly_F(self)

    def V(self):
        return poly_V(self)

    def R(self):
        return poly_R(self)

    def d(self):
        return poly_d(self)

    def iota(self):
        return poly_iota(self)

    # identity
    def _key(self):
        return (self.p, self.n, self.q if not self.is_zero() else None,
                frozenset(self.t1.items()), frozenset(self.t2.items()),
                frozenset(self.t3.items()), frozenset(self.t4.items()))

    def __eq__(self, other):
        if not isinstance(other, PolyDrwElement):
            return NotImplemented
        if self.p != other.p or self.n != other.n:
            return False
        if not self.is_zero() and self.q != other.q:
            return False
        return (self.t1 == other.t1 and self.t2 == other.t2
                and self.t3 == other.t3 and self.t4 == other.t4)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"PolyDrwElement({self})"

    def __str__(self):
        from .formats import poly_to_text

        return poly_to_text(self)


def _deg_of(e: DrwElement, q: int | None) -> int:
    d = e.degree
    if d is None:
        if q is None:
            raise ValueError("the degree of a zero coefficient must be given")
        return q
    if q is not None and q != d:
        raise ValueError(f"coefficient has degree {d}, expected {q}")
    return d


def _expect(ok: bool, what: str):
    if not ok:
        raise ValueError(f"invalid {what}")


def _expect_coeff(e: DrwElement, p: int, level: int, deg: int, where: str):
    if not isinstance(e, DrwElement) or e.p != p or e.n != level or e.log:
        raise ValueError(f"coefficient of {where} must be a level-{level} element of the base complex")
    if e.is_zero():
        raise ValueError(f"zero coefficient stored for {where}")
    if deg < 0 or deg > 1 or e.degree != deg:
        raise ValueError(f"coefficient of {where} must have degree {deg}")


def _single(p, n, q, kind, key, e) -> PolyDrwElement:
    maps = [{}, {}, {}, {}]
    maps[kind - 1][key] = e
    return PolyDrwElement._raw(p, n, q, *maps)


class _Acc:
    """Mutable accumulator for building a :class:`PolyDrwElement`."""

    __slots__ = ("p", "n", "q", "maps")

    def __init__(self, p: int, n: int, q: int):
        self.p, self.n, self.q = p, n, q
        self.maps = ({}, {}, {}, {})

    def add(self, kind: int, key, e: DrwElement, c=1):
        if e.is_zero():
            return
        if c != 1:
            e = e.scale(c)
            if e.is_zero():
                return
        m = self.maps[kind - 1]
        cur = m.get(key)
        m[key] = e if cur is None else cur + e

    def add_elem(self, x: PolyDrwElement, c=1):
        for kind, m in enumerate((x.t1, x.t2, x.t3, x.t4), start=1):
            for key, e in m.items():
                self.add(kind, key, e, c)

    def build(self) -> PolyDrwElement:
        maps = [{k: v for k, v in m.items() if not v.is_zero()} for m in self.maps]
        return PolyDrwElement._raw(self.p, self.n, self.q, *maps)

    # normal forms of V-images
    def v_of_type1(self, r: int, C: DrwElement, L: int, c=1):
        """Add ``c · V^r(C [X]^L)`` with ``C`` at level ``n - r``."""
        if r == 0:
            self.add(1, L, C, c)
            return
        v = _vp(L, self.p)
        if v >= r:
            self.add(1, L // self.p ** r, _Vpow(C, r), c)
        else:
            v = int(v)
            self.add(3, (r - v, L // self.p ** v), _Vpow(C, v), c)

    def v_of_type2(self, t: int, B: DrwElement, degB: int, K: int, c=1):
        """Add ``c · V^t(B [X]^(K-1) d[X])`` with ``B`` at level ``n - t``."""
        p = self.p
        if t == 0:
            self.add(2, K, B, c)
            return
        v = _vp(K, p)
        if v >= t:
            self.add(2, K // p ** t, _Vpow(B, t), c)
            return
        v = int(v)
        B = _Vpow(B, v)
        K //= p ** v
        t -= v
        sg = _sign(degB)
        self.add(4, (t, K), B, c * sg * _frac(p ** t, K, p))
        self.add(3, (t, K), B.d(), -c * sg * _frac(1, K, p))


# ---------------------------------------------------------------- operators


def poly_V(x: PolyDrwElement) -> PolyDrwElement:
    p, n, q = x.p, x.n, x.q
    acc = _Acc(p, n + 1, q)
    for j, a in x.t1.items():
        if j % p == 0:
            acc.add(1, j // p, a.V())
        else:
            acc.add(3, (1, j), a)
    for k, b in x.t2.items():
        acc.v_of_type2(1, b, q - 1, k)
    for (r, l), c in x.t3.items():
        acc.add(3, (r + 1, l), c)
    for (s, m), e in x.t4.items():
        acc.add(4, (s + 1, m), e, p)
    return acc.build()


def poly_F(x: PolyDrwElement) -> PolyDrwElement:
    p, n, q = x.p, x.n, x.q
    if n < 2:
        raise LengthTooShort("F needs level >= 2")
    acc = _Acc(p, n - 1, q)
    for j, a in x.t1.items():
        acc.add(1, p * j, a.F())
    for k, b in x.t2.items():
        acc.add(2, p * k, b.F())
    for (r, l), c in x.t3.items():
        if r >= 2:
            acc.add(3, (r - 1, l), c, p)
        else:
            acc.add(1, l, c, p)
    for (s, m), e in x.t4.items():
        if s >= 2:
            acc.add(4, (s - 1, m), e)
            acc.add(3, (s - 1, m), e.iota())
        else:
            # (d + iota)(e [X]^m) at level n - 1
            acc.add(1, m, e.d() + e.iota())
            acc.add(2, m, e, _sign(q - 1) * m)
    return acc.build()


def poly_R(x: PolyDrwElement) -> PolyDrwElement:
    p, n, q = x.p, x.n, x.q
    if n < 2:
        raise LengthTooShort("R needs level >= 2")
    acc = _Acc(p, n - 1, q)
    for j, a in x.t1.items():
        acc.add(1, j, a.R())
    for k, b in x.t2.items():
        acc.add(2, k, b.R())
    for (r, l), c in x.t3.items():
        if r < n - 1:
            acc.add(3, (r, l), c.R())
    for (s, m), e in x.t4.items():
        if s < n - 1:
            acc.add(4, (s, m), e.R())
    return acc.build()


def poly_d(x: PolyDrwElement) -> PolyDrwElement:
    p, n, q = x.p, x.n, x.q
    acc = _Acc(p, n, q + 1)
    for j, a in x.t1.items():
        acc.add(1, j, a.d())
        if j:
            acc.add(2, j, a, _sign(q) * j)
    for k, b in x.t2.items():
        acc.add(2, k, b.d())
        acc.add(2, k, b.iota(), k)
    for key, c in x.t3.items():
        acc.add(4, key, c)
    for key, e in x.t4.items():
        acc.add(4, key, e.iota())
    return acc.build()


def poly_iota(x: PolyDrwElement) -> PolyDrwElement:
    acc = _Acc(x.p, x.n, x.q + 1)
    for kind, m in enumerate((x.t1, x.t2, x.t3, x.t4), start=1):
        for key, e in m.items():
            acc.add(kind, key, e.iota())
    return acc.build()


# ---------------------------------------------------------------- products


def poly_mul(x: PolyDrwElement, y: PolyDrwElement) -> PolyDrwElement:
    """Product in ``P(E)`` from the closed forms, extended bilinearly."""
    x._check(y)
    acc = _Acc(x.p, x.n, x.q + y.q)
    for kx, key_x, ex in x.terms():
        for ky, key_y, ey in y.terms():
            _mul_terms(acc, kx, key_x, ex, x.q, ky, key_y, ey, y.q)
    return acc.build()


def _swap_needed(kx, key_x, ky, key_y) -> bool:
    if kx != ky:
        return kx > ky
    if kx == 3:
        return key_x[0] < key_y[0]
    if kx == 4:
        return key_x[0] > key_y[0]
    return False


def _mul_terms(acc: _Acc, kx, key_x, ex, qx, ky, key_y, ey, qy, c=1):
    if _swap_needed(kx, key_x, ky, key_y):
        _mul_terms(acc, ky, key_y, ey, qy, kx, key_x, ex, qx, c * _sign(qx * qy))
        return
    p, n = acc.p, acc.n
    dx = qx if kx in (1, 3) else qx - 1
    dy = qy if ky in (1, 3) else qy - 1
    pair = (kx, ky)
    if pair == (1, 1):
        acc.add(1, key_x + key_y, ex * ey, c)
    elif pair == (1, 2):
        acc.add(2, key_x + key_y, ex * ey, c)
    elif pair == (1, 3):
        j, a = key_x, ex
        (r, l), cc = key_y, ey
        acc.add(3, (r, p ** r * j + l), _Fpow(a, r) * cc, c)
    elif pair == (1, 4):
        j, a = key_x, ex
        (s, m), e = key_y, ey
        N = p ** s * j + m
        A = _Fpow(a, s)
        Ae = A * e
        sg = _sign(dx)
        acc.add(4, (s, N), Ae, c * sg * _frac(m, N, p))
        inner = _Fpow(a.d(), s) * e - (Ae.d()).scale(_frac(j, N, p))
        acc.add(3, (s, N), inner, -c * sg)
    elif pair == (2, 2):
        if p == 2:
            acc.add(2, key_x + key_y, (ex * ey).iota(), c)
    elif pair == (2, 3):
        k, b = key_x, ex
        (r, l), cc = key_y, ey
        N = p ** r * k + l
        G = _Fpow(b, r) * cc
        sg = _sign(dx)
        acc.add(4, (r, N), G, c * sg * _frac(p ** r, N, p))
        acc.add(3, (r, N), G.d(), -c * sg * _frac(1, N, p))
    elif pair == (2, 4):
        k, b = key_x, ex
        (s, m), e = key_y, ey
        N = p ** s * k + m
        sg = _sign(dx)
        de = e.d()
        acc.add(4, (s, N), _Fpow(b, s) * de, c * sg * _frac(1, N, p))
        inner = _Fpow(b.d() + b.iota().scale(k), s) * de
        acc.add(3, (s, N), inner, -c * sg * _frac(1, N, p))
    elif pair == (3, 3):
        (r, l), cx = key_x, ex
        (r2, l2), cy = key_y, ey
        if r > r2:
            acc.add(3, (r, p ** (r - r2) * l2 + l), cx * _Fpow(cy, r - r2), c * p ** r2)
        else:
            acc.v_of_type1(r, cx * cy, l + l2, c * p ** r)
    elif pair == (3, 4):
        (r, l), cc = key_x, ex
        (s, m), e = key_y, ey
        sg = _sign(dx)
        if r < s:
            N = p ** (s - r) * l + m
            C = _Fpow(cc, s - r)
            Ce = C * e
            acc.add(4, (s, N), Ce, c * sg * _frac(p ** r * m, N, p))
            inner = _Fpow(cc.d(), s - r) * e - Ce.d().scale(_frac(l, N, p))
            acc.add(3, (s, N), inner, -c * sg)
            acc.add(3, (s, N), Ce.iota(), c)
        elif r == s:
            acc.v_of_type1(r, cc * (e.d() + e.iota()), l + m, c)
            acc.v_of_type2(r, cc * e, dx + dy, l + m, c * _sign(dy) * m)
        else:
            M = p ** (r - s) * m + l
            B = cc * _Fpow(e, r - s)
            acc.add(3, (r, M), cc * _Fpow(e.d() + e.iota(), r - s), c)
            acc.add(4, (r, M), B, c * sg * _frac(p ** r * m, M, p))
            acc.add(3, (r, M), B.d(), -c * sg * _frac(m, M, p))
    elif pair == (4, 4):
        _mul_44(acc, key_x, ex, dx, key_y, ey, dy, c)
    else:  # pragma: no cover
        raise AssertionError(f"unordered pair {pair}")


def _mul_44(acc: _Acc, key_x, e, eps, key_y, e2, eps2, c):
    """``dV^s(e[X]^m) · dV^s'(e'[X]^m')`` for ``s <= s'``."""
    p, n = acc.p, acc.n
    (s, m), (s2, m2) = key_x, key_y
    t = s2 - s
    L = p ** t * m + m2
    inner_level = n - s2
    # F^{s'}(x) u' as a level n-s' element, then V^{s'} and d
    first = _Acc(p, inner_level, eps + 1 + eps2)
    first.add(1, L, _Fpow(e.d() + e.iota(), t) * e2)
    first.add(2, L, _Fpow(e, t) * e2, _sign(eps) * _sign(eps2) * m)
    vf = _Acc(p, n, eps + 1 + eps2)
    for kind, key, coeff in first.build().terms():
        if kind == 1:
            vf.v_of_type1(s2, coeff, key)
        else:
            vf.v_of_type2(s2, coeff, eps + eps2, key)
    acc.add_elem(poly_d(vf.build()), c * _sign(eps + 1))
    # F^{s'}(dx) u' with dx = dV^s(iota(e) [X]^m)
    ie = e.iota()
    second = _Acc(p, inner_level, eps + 2 + eps2)
    second.add(1, L, _Fpow(ie.d() + ie.iota(), t) * e2)
    second.add(2, L, _Fpow(ie, t) * e2, _sign(eps + 1) * _sign(eps2) * m)
    for kind, key, coeff in second.build().terms():
        if kind == 1:
            acc.v_of_type1(s2, coeff, key, -c * _sign(eps + 1))
        else:
            acc.v_of_type2(s2, coeff, eps + 1 + eps2, key, -c * _sign(eps + 1))


# ---------------------------------------------------------------- reference oracle


def _vpow_elem(x: PolyDrwElement, t: int) -> PolyDrwElement:
    for _ in range(t):
        x = poly_V(x)
    return x


def _fpow_elem(x: PolyDrwElement, t: int) -> PolyDrwElement:
    for _ in range(t):
        x = poly_F(x)
    return x


def reference_mul(x: PolyDrwElement, y: PolyDrwElement) -> PolyDrwElement:
    """Products recomputed from the operator tables and the four basic products."""
    x._check(y)
    total = PolyDrwElement.zero(x.p, x.n, x.q + y.q)
    for gx in x.generators():
        for gy in y.generators():
            total = total + _ref_gen(gx, gy)
    return total


def _ref_gen(x: PolyDrwElement, y: PolyDrwElement) -> PolyDrwElement:
    p, n = x.p, x.n
    (kx, key_x, ex), = x.terms()
    (ky, key_y, ey), = y.terms()
    q = x.q + y.q
    if ky == 3:
        r, l = key_y
        u = _single(p, n - r, y.q, 1, l, ey)
        return _vpow_elem(reference_mul(_fpow_elem(x, r), u), r)
    if ky == 4:
        s, m = key_y
        u = _single(p, n - s, y.q - 1, 1, m, ey)
        first = _vpow_elem(reference_mul(_fpow_elem(x, s), u), s).d()
        second = _vpow_elem(reference_mul(_fpow_elem(x.d(), s), u), s)
        return (first - second).scale(_sign(x.q))
    if kx in (3, 4):
        return _ref_gen(y, x).scale(_sign(x.q * y.q))
    acc = _Acc(p, n, q)
    if (kx, ky) == (1, 1):
        acc.add(1, key_x + key_y, ex * ey)
    elif (kx, ky) == (1, 2):
        acc.add(2, key_x + key_y, ex * ey)
    elif (kx, ky) == (2, 1):
        acc.add(2, key_x + key_y, ex * ey, _sign(y.q))
    else:
        acc.add(2, key_x + key_y, (ex * ey).iota())
    return acc.build()


# ---------------------------------------------------------------- lambda and ghosts


def poly_lambda(w: WittVector) -> PolyDrwElement:
    """Write ``w`` in ``W_n(A[X])`` as ``sum a_{0,j}[X]^j + sum V^s(a_{s,j}[X]^j)``.

    The ghost entry ``w_i`` receives ``alpha_i X^(p^i j)`` from ``a_{0,j}[X]^j`` and
    ``p^s gamma_{i-s} X^(p^(i-s) j)`` from ``V^s(a_{s,j}[X]^j)``.  Each monomial
    ``X^t`` of ``w_i`` therefore belongs to exactly one unknown: to ``a_{0,t/p^i}``
    when ``p^i | t``, otherwise to ``a_{s,j}`` with ``s = i - v_p(t)``.
    """
    p, n = w.p, w.n
    comps = tuple(c if isinstance(c, SparsePoly) else SparsePoly.const(c) for c in w.components)
    g = ghost(WittVector(p, comps)).entries
    slots: dict[tuple[int, int], dict[int, object]] = {}
    for i, wi in enumerate(g):
        for t, coeff in wi.items():
            v = _vp(t, p)
            if v >= i:
                key, pos, val = (0, t // p ** i), i, coeff
            else:
                v = int(v)
                s = i - v
                key, pos = (s, t // p ** v), v
                num = Fraction(coeff) / p ** s
                if num.denominator % p == 0:
                    raise NonIntegralGhost(i, p, wi)
                val = num
            slots.setdefault(key, {})[pos] = val
    acc = _Acc(p, n, 0)
    for (s, j), entries in slots.items():
        length = n - s
        gv = GhostVector(p, tuple(entries.get(i, 0) for i in range(length)))
        coeff = DrwElement(p, length, deg0=v_basis_decompose(unghost(gv)))
        if s == 0:
            acc.add(1, j, coeff)
        else:
            acc.add(3, (s, j), coeff)
    out = acc.build()
    if poly_ghost(out) != tuple(g):
        raise InconsistentDecomposition(f"ghost coordinates of the decomposition of {w} do not match")
    return out


def poly_ghost(x: PolyDrwElement) -> tuple:
    """Ghost coordinates of a degree-0 element, read back through ``W_n(Z_(p)[X])``."""
    if x.q != 0 and not x.is_zero():
        raise ValueError("ghost coordinates exist only in degree 0")
    p, n = x.p, x.n
    out = [SparsePoly() for _ in range(n)]
    for j, a in x.t1.items():
        alpha = ghost(v_basis_compose(a.deg0, p)).entries
        for i in range(n):
            out[i] = out[i] + SparsePoly.monomial(alpha[i], p ** i * j)
    for (r, l), c in x.t3.items():
        gamma = ghost(v_basis_compose(c.deg0, p)).entries
        for i in range(r, n):
            out[i] = out[i] + SparsePoly.monomial(p ** r * gamma[i - r], p ** (i - r) * l)
    return tuple(out)


def witt_from_poly(x: PolyDrwElement) -> WittVector:
    return unghost(GhostVector(x.p, poly_ghost(x)))


# ---------------------------------------------------------------- sampling


def prime_to_p(p: int, bound: int) -> list[int]:
    return [l for l in range(1, bound + 1) if l % p]


class PolyModel:
    """``P(E)`` for the base complex E, as seen by the relation runner."""

    max_degree = 2
    polynomial = True

    def __init__(self, p: int = 2, jmax: int = 3, lmax: int = 3):
        self.p = p
        self.jmax = jmax
        self.lmax = lmax

    def basis(self, n, q):
        p = self.p
        out = []
        for j in range(self.jmax + 1):
            out += [PolyDrwElement.type1(j, a) for a in base_basis(p, n, q)]
        for k in range(1, self.jmax + 1):
            out += [PolyDrwElement.type2(k, b) for b in base_basis(p, n, q - 1)]
        for r in range(1, n):
            for l in prime_to_p(p, self.lmax):
                out += [PolyDrwElement.type3(r, l, c) for c in base_basis(p, n - r, q)]
                out += [PolyDrwElement.type4(r, l, e) for e in base_basis(p, n - r, q - 1)]
        return out

    def random(self, rng, n, q, terms: int = 3):
        acc = _Acc(self.p, n, q)
        for _ in range(terms):
            kind, key, level, deg = random_slot(rng, self.p, n, q, self.jmax + 2, self.lmax + 2)
            if kind is None:
                continue
            acc.add(kind, key, base_random(rng, self.p, level, deg, fractions=False))
        return acc.build()

    def zero(self, n, q=0):
        return PolyDrwElement.zero(self.p, n, q)

    def one(self, n):
        return PolyDrwElement.one(self.p, n)

    def lam(self, w):
        return poly_lambda(w)

    def random_witt(self, rng, n):
        comps = tuple(
            SparsePoly({e: rng.randint(-3, 3) for e in range(rng.randint(0, 2) + 1)})
            for _ in range(n)
        )
        return WittVector(self.p, comps)

    def teich_values(self):
        X = SparsePoly.X()
        return [
            SparsePoly.const(-1), X, X * 2, X ** 2 * -1, X ** 3 * 2, X ** 3 * 2 - X + 3,
            X + 1, X ** 2 * 3 + X * -2, X ** 3 - X ** 2 + 1,
        ]

    def lam_teich(self, a, n):
        if not isinstance(a, SparsePoly):
            a = SparsePoly.const(a)
        return poly_lambda(teichmuller(a, n, self.p))


def random_slot(rng, p, n, q, jmax, lmax):
    """A random admissible (type, key) for degree q, with coefficient level and degree."""
    options = []
    if 0 <= q <= 1:
        options.append(1)
        if n >= 2:
            options.append(3)
    if 1 <= q <= 2:
        options.append(2)
        if n >= 2:
            options.append(4)
    if not options:
        return None, None, None, None
    kind = rng.choice(options)
    if kind == 1:
        return 1, rng.randint(0, jmax), n, q
    if kind == 2:
        return 2, rng.randint(1, jmax), n, q - 1
    r = rng.randint(1, n - 1)
    l = rng.choice(prime_to_p(p, lmax))
    if kind == 3:
        return 3, (r, l), n - r, q
    return 4, (r, l), n - r, q - 1


# ---------------------------------------------------------------- checks


def check_poly_witt_axioms(p: int = 2, n_max: int = 4, fuel: int = 4, seed: int = 0):
    """Witt-complex relations in ``P(E)`` plus the polynomial-specific identities."""
    from .axioms import run_relations

    model = PolyModel(p)
    rec = run_relations(model, n_max, seed=seed, random_count=fuel, pair_limit=300, triple_count=40, witt_count=4)
    rng = random.Random(seed + 1)
    X = SparsePoly.X()
    for n in range(1, n_max + 1):
        dX = PolyDrwElement.dX(p, n)
        eta0 = model.lam_teich(-1, n) * model.lam_teich(-1, n).d()
        rec.equal("d[X]d[X] = iota([1])[X]d[X]", dX * dX, (eta0 * PolyDrwElement.X(p, n)) * dX, f"n={n}")
        rec.equal("d(d[X]) = iota(d[X])", dX.d(), dX.iota(), f"n={n}")
        if n < 2:
            continue
        fs = [SparsePoly.monomial(a, m) for a in (1, 2, -1, 3) for m in (1, 2, 3)]
        fs += [SparsePoly({e: rng.randint(-4, 4) for e in range(4)}) for _ in range(fuel)]
        for f in fs:
            tn, tm = model.lam_teich(f, n), model.lam_teich(f, n - 1)
            rhs = tm.d()
            for _ in range(p - 1):
                rhs = tm * rhs
            rec.equal("Fd lambda[f] = lambda[f]^(p-1) d lambda[f] (f in Z[X])", tn.d().F(), rhs, f"n={n}, f={f}")
        for q in range(3):
            for g in model.basis(n - 1, q):
                rec.equal("FdV = d + iota on generators", g.V().d().F(), g.d() + g.iota(), lambda: f"{g}")
    return rec.report("poly axioms", {"p": p, "n_max": n_max, "fuel": fuel, "seed": seed})


TYPE_LETTER = {3: "r", 4: "s"}


def weak_orderings(k: int) -> list[tuple[int, ...]]:
    """Rank vectors of length k whose values are exactly ``0..m-1`` for some m."""
    out = []
    for ranks in itertools.product(range(k), repeat=k):
        if set(ranks) == set(range(max(ranks) + 1 if ranks else 0)):
            out.append(ranks)
    return out


def associativity_cases() -> list[tuple[tuple[int, int, int], tuple[int, ...], str]]:
    """The 80 (type triple, level ordering) cases, each with a readable label."""
    cases = []
    for types in itertools.combinations_with_replacement((1, 2, 3, 4), 3):
        vpos = [i for i, t in enumerate(types) if t >= 3]
        names = []
        seen = {3: 0, 4: 0}
        for i in vpos:
            t = types[i]
            names.append(TYPE_LETTER[t] + "'" * seen[t])
            seen[t] += 1
        base = "A" + ".".join(map(str, types))
        if len(vpos) <= 1:
            cases.append((types, (0,) * len(vpos), base))
            continue
        for ranks in weak_orderings(len(vpos)):
            groups = {}
            for nm, rk in zip(names, ranks):
                groups.setdefault(rk, []).append(nm)
            label = "<".join("=".join(groups[g]) for g in sorted(groups))
            cases.append((types, ranks, f"{base} {label}"))
    return cases


def sample_case_instance(rng, p, n, types, ranks, emax=8):
    """Three generators realising one associativity case at level n."""
    m = max(ranks) + 1 if ranks else 0
    levels = sorted(rng.sample(range(1, n), m)) if m else []
    slots = []
    vi = 0
    for t in types:
        if t >= 3:
            slots.append(levels[ranks[vi]])
            vi += 1
        else:
            slots.append(0)
    # coefficient degrees: keep the total degree <= 2 when the types allow it
    base_deg = [1 if t in (2, 4) else 0 for t in types]
    for _ in range(20):
        cdeg = [rng.randint(0, 1) for _ in types]
        if sum(b + c for b, c in zip(base_deg, cdeg)) <= 2:
            break
    else:
        cdeg = [0, 0, 0]
    out = []
    odd = prime_to_p(p, emax)
    for t, lev, cd in zip(types, slots, cdeg):
        q = cd + (1 if t in (2, 4) else 0)
        if t == 1:
            g = _single(p, n, q, 1, rng.randint(0, emax), base_random(rng, p, n, cd, fractions=False))
        elif t == 2:
            g = _single(p, n, q, 2, rng.randint(1, emax), base_random(rng, p, n, cd, fractions=False))
        elif t == 3:
            g = _single(p, n, q, 3, (lev, rng.choice(odd)), base_random(rng, p, n - lev, cd, fractions=False))
        else:
            g = _single(p, n, q, 4, (lev, rng.choice(odd)), base_random(rng, p, n - lev, cd, fractions=False))
        out.append(g if not _coeff_zero(g) else PolyDrwElement.zero(p, n, q))
    return out


def _coeff_zero(g: PolyDrwElement) -> bool:
    return any(e.is_zero() for _, _, e in g.terms())


def check_associativity(p: int = 2, n_max: int = 4, fuel: int = 200, seed: int = 0, permute: bool = True):
    """Evaluate ``(xy)z`` and ``x(yz)`` on sampled generators for every case."""
    from .axioms import Recorder

    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    rng = random.Random(seed)
    rec = Recorder()
    nonzero: dict[str, int] = {}
    for types, ranks, label in associativity_cases():
        m = max(ranks) + 1 if ranks else 0
        lo = max(2, m + 1) if any(t >= 3 for t in types) else 1
        if lo > n_max:
            rec.truth(label, False, f"level {n_max} is too small for this case")
            continue
        nonzero[label] = 0
        for _ in range(fuel):
            n = rng.randint(lo, n_max)
            x, y, z = sample_case_instance(rng, p, n, types, ranks)
            triples = [(x, y, z)]
            if permute:
                perm = [x, y, z]
                rng.shuffle(perm)
                triples.append(tuple(perm))
            for a, b, c in triples:
                lhs = (a * b) * c
                rhs = a * (b * c)
                rec.equal(label, lhs, rhs, lambda: f"n={n}, x={a}, y={b}, z={c}")
                if not lhs.is_zero():
                    nonzero[label] += 1
    report = rec.report("associativity", {"p": p, "n_max": n_max, "fuel": fuel, "seed": seed})
    report.extra = {
        "cases": len(report.relations),
        "nonzero_products": nonzero,
    }
    return report
