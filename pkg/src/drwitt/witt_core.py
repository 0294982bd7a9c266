"""p-typical Witt vectors over torsion-free rings, computed in ghost coordinates.

The supported base rings are the p-local rationals (stored as ``int`` or
``fractions.Fraction`` with denominator prime to p) and one-variable
polynomials over them (:class:`~drwitt.polynomial.SparsePoly`).  All of them
are p-torsion free, so the ghost map is injective and every ring operation is
"map to ghost coordinates, operate entrywise, divide back exactly".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .polynomial import SparsePoly, Scalar, normalize_scalar

BaseElem = Union[int, Fraction, SparsePoly]


class NonIntegralGhost(ArithmeticError):
    """A ghost vector has no preimage: division by p^s is not exact."""

    def __init__(self, index: int, p: int, value):
        self.index = index
        self.p = p
        self.value = value
        super().__init__(
            f"ghost entry {index} is not integral: {value} is not divisible by {p}^{index}"
        )


class LengthTooShort(ValueError):
    pass


class NotPLocal(ValueError):
    pass


def is_p_local(x: Scalar, p: int) -> bool:
    return isinstance(x, int) or x.denominator % p != 0


def p_local(x, p: int) -> Scalar:
    """Return ``x`` as an element of Z_(p), raising :class:`NotPLocal` otherwise."""
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise NotPLocal(f"{x} has denominator divisible by {p}")
        return normalize_scalar(x)
    if isinstance(x, int):
        return x
    raise TypeError(f"not a p-local scalar: {x!r}")


def mod_pk(x: Scalar, m: int) -> int:
    """Residue of a p-local scalar modulo ``m`` (a power of p)."""
    if isinstance(x, int):
        return x % m
    return x.numerator * pow(x.denominator, -1, m) % m


def valuation(x: int, p: int) -> int:
    """p-adic valuation of a non-zero integer."""
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _ring_tag(components: Sequence[BaseElem], p: int) -> str:
    if any(isinstance(c, SparsePoly) for c in components):
        integral = all(isinstance(a, int) for c in components for _, a in c.items())
        return "Z[X]" if integral else f"Z({p})[X]"
    return "Z" if all(isinstance(c, int) for c in components) else f"Z({p})"


def _exact_div(x: BaseElem, pk: int, index: int, p: int) -> BaseElem:
    if isinstance(x, SparsePoly):
        out = {}
        for e, c in x.items():
            if not _scalar_divisible(c, pk):
                raise NonIntegralGhost(index, p, x)
            out[e] = _scalar_div(c, pk)
        return SparsePoly(out)
    if not _scalar_divisible(x, pk):
        raise NonIntegralGhost(index, p, x)
    return _scalar_div(x, pk)


def _scalar_divisible(c: Scalar, pk: int) -> bool:
    num = c if isinstance(c, int) else c.numerator
    return num % pk == 0


def _scalar_div(c: Scalar, pk: int) -> Scalar:
    if isinstance(c, int):
        return c // pk
    return normalize_scalar(c / pk)


def _check_base(x: BaseElem, p: int) -> BaseElem:
    if isinstance(x, SparsePoly):
        for _, c in x.items():
            if not is_p_local(c, p):
                raise NotPLocal(f"coefficient {c} of {x} is not {p}-local")
        return x
    return p_local(x, p)


@dataclass(frozen=True)
class WittVector:
    """An element of W_n(A): components ``(a_0, ..., a_{n-1})``."""

    p: int
    components: tuple

    def __post_init__(self):
        if len(self.components) < 1:
            raise ValueError("Witt vectors have length >= 1")
        comps = tuple(_check_base(c, self.p) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len({type(c) is SparsePoly for c in comps}) > 1:
            # mixed scalars and polynomials: lift scalars to constant polynomials
            object.__setattr__(
                self,
                "components",
                tuple(c if isinstance(c, SparsePoly) else SparsePoly.const(c) for c in comps),
            )

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def ring(self) -> str:
        return _ring_tag(self.components, self.p)

    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.components[0], SparsePoly)

    def __getitem__(self, i):
        return self.components[i]

    def _compatible(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError(f"expected WittVector, got {type(other).__name__}")
        if other.p != self.p or other.n != self.n:
            raise ValueError(
                f"incompatible Witt vectors: p={self.p},n={self.n} vs p={other.p},n={other.n}"
            )

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __mul__(self, other):
        if isinstance(other, int):
            return scalar_multiple(self, other)
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return witt_neg(self)

    def __str__(self):
        from .formats import witt_to_text

        return witt_to_text(self)


@dataclass(frozen=True)
class GhostVector:
    p: int
    entries: tuple

    @property
    def n(self) -> int:
        return len(self.entries)


def _powers_table(components, p):
    """Yield, for each s, the list ``[a_i^(p^(s-i)) for i <= s]``."""
    cur: list = []
    for a in components:
        cur = [c ** p for c in cur]
        cur.append(a)
        yield cur


def ghost(w: WittVector) -> GhostVector:
    p = w.p
    entries = []
    for s, pw in enumerate(_powers_table(w.components, p)):
        total = 0
        for i, t in enumerate(pw):
            total = total + (p ** i) * t
        entries.append(total)
    return GhostVector(p, tuple(entries))


def unghost(g: GhostVector) -> WittVector:
    """Invert the ghost map; raises :class:`NonIntegralGhost` if no preimage exists."""
    p = g.p
    comps: list = []
    cur: list = []
    for s, w_s in enumerate(g.entries):
        cur = [c ** p for c in cur]
        rest = w_s
        for i, t in enumerate(cur):
            rest = rest - (p ** i) * t
        a_s = _exact_div(rest, p ** s, s, p)
        comps.append(a_s)
        cur.append(a_s)
    return WittVector(p, tuple(comps))


def _zero_like(x: BaseElem) -> BaseElem:
    return SparsePoly() if isinstance(x, SparsePoly) else 0


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    x._compatible(y)
    gx, gy = ghost(x), ghost(y)
    return unghost(GhostVector(x.p, tuple(a + b for a, b in zip(gx.entries, gy.entries))))


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    x._compatible(y)
    gx, gy = ghost(x), ghost(y)
    return unghost(GhostVector(x.p, tuple(a * b for a, b in zip(gx.entries, gy.entries))))


def witt_neg(x: WittVector) -> WittVector:
    gx = ghost(x)
    return unghost(GhostVector(x.p, tuple(-a for a in gx.entries)))


def scalar_multiple(x: WittVector, k: int) -> WittVector:
    """``k`` times ``x`` in the additive group of W_n."""
    gx = ghost(x)
    return unghost(GhostVector(x.p, tuple(k * a for a in gx.entries)))


def witt_zero(p: int, n: int, poly: bool = False) -> WittVector:
    z = SparsePoly() if poly else 0
    return WittVector(p, (z,) * n)


def witt_one(p: int, n: int, poly: bool = False) -> WittVector:
    return teichmuller(SparsePoly.const(1) if poly else 1, n, p)


def teichmuller(a: BaseElem, n: int, p: int = 2) -> WittVector:
    """The multiplicative representative ``[a]_n = (a, 0, ..., 0)``."""
    if n < 1:
        raise ValueError("length must be >= 1")
    return WittVector(p, (a,) + (_zero_like(a),) * (n - 1))


def frobenius(w: WittVector) -> WittVector:
    if w.n < 2:
        raise LengthTooShort("Frobenius needs length >= 2")
    g = ghost(w)
    return unghost(GhostVector(w.p, g.entries[1:]))


def verschiebung(w: WittVector) -> WittVector:
    return WittVector(w.p, (_zero_like(w.components[0]),) + w.components)


def restriction(w: WittVector) -> WittVector:
    if w.n < 2:
        raise LengthTooShort("restriction needs length >= 2")
    return WittVector(w.p, w.components[:-1])


def v_basis_decompose(w: WittVector) -> tuple:
    """Coefficients ``c_s`` with ``w = sum_s c_s V^s([1]_{n-s})``.

    Only for scalar base rings.  ``c_0 = w_0`` and ``c_s = (w_s - w_{s-1}) / p^s``.
    """
    if w.is_polynomial:
        raise TypeError("the V^s(1) basis only spans W_n over Z or Z_(p)")
    p = w.p
    g = ghost(w).entries
    coeffs = [g[0]]
    for s in range(1, w.n):
        diff = g[s] - g[s - 1]
        c = Fraction(diff) / p ** s
        assert c.denominator % p != 0, f"non-integral basis coefficient c_{s} = {c}"
        coeffs.append(normalize_scalar(c))
    return tuple(coeffs)


def v_basis_compose(coeffs: Sequence[Scalar], p: int) -> WittVector:
    """Inverse of :func:`v_basis_decompose`: ghost entry s is ``sum_{i<=s} p^i c_i``."""
    entries = []
    total = 0
    for i, c in enumerate(coeffs):
        total = total + p ** i * c
        entries.append(total)
    return unghost(GhostVector(p, tuple(entries)))


def v_power_one(p: int, n: int, s: int) -> WittVector:
    """``V^s([1]_{n-s})`` as a length-n vector."""
    return WittVector(p, tuple(1 if i == s else 0 for i in range(n)))


def teichmuller_coeffs(a: int, n: int, p: int = 2) -> tuple:
    """Closed form for the basis coefficients of ``[a]_n``.

    ``c_0 = a`` and ``c_i = p^-i (a^(p^i) - a^(p^(i-1)))``.
    """
    out = [a]
    for i in range(1, n):
        num = a ** (p ** i) - a ** (p ** (i - 1))
        q, r = divmod(num, p ** i)
        assert r == 0, f"c_{i} of [{a}]_{n} is not integral"
        out.append(q)
    return tuple(out)


def integrality_congruence(a: int, n: int, p: int) -> bool:
    """``a^(p^(n-1)) (a^(p^n - p^(n-1)) - 1) == 0 (mod p^n)``."""
    m = p ** n
    return pow(a, p ** (n - 1), m) * (pow(a, p ** n - p ** (n - 1), m) - 1) % m == 0


def square_roots_of_unity(n: int) -> list[WittVector]:
    """The square roots of 1 in W_n(Z), p = 2.

    Returns ``[1], [-1], -[1], -[-1]`` with coincidences removed.  The list is
    cross-checked against a component-by-component solve of ``w_s^2 = 1``.
    """
    p = 2
    one = teichmuller(1, n, p)
    m_one = teichmuller(-1, n, p)
    listed = []
    for x in (one, m_one, witt_neg(one), witt_neg(m_one)):
        if x not in listed:
            listed.append(x)
    solved = _solve_square_roots(n, p)
    assert set(solved) == set(listed), (solved, listed)
    for x in solved:
        # a_s is forced to repeat a_1 for every s >= 1
        assert all(a == x.components[1] for a in x.components[1:]) if n > 1 else True
        assert x.components[1:] in ((0,) * (n - 1), (-1,) * (n - 1))
    return listed


def _solve_square_roots(n: int, p: int) -> list[WittVector]:
    """All integral (a_0..a_{n-1}) with every ghost entry squaring to 1."""
    partial: list[list[int]] = [[]]
    for s in range(n):
        nxt = []
        for comps in partial:
            base = sum(p ** i * comps[i] ** (p ** (s - i)) for i in range(s))
            for target in (1, -1):
                num = target - base
                if num % p ** s == 0:
                    nxt.append(comps + [num // p ** s])
        partial = nxt
    return [WittVector(p, tuple(c)) for c in partial]
