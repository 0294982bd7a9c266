"""Sparse univariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


def normalize_scalar(c: Scalar) -> Scalar:
    """Collapse integral fractions to ``int`` so equal values share a type."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SparsePoly:
    """A polynomial in one variable ``X`` stored as ``{exponent: coefficient}``.

    Zero coefficients are never stored, so the zero polynomial has empty
    support.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Scalar] = {}
        for e, c in items:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: normalize_scalar(c) for e, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> "SparsePoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Scalar, e: int) -> "SparsePoly":
        return cls({e: c})

    @classmethod
    def X(cls) -> "SparsePoly":
        return cls({1: 1})

    @property
    def terms(self) -> dict[int, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, e: int) -> Scalar:
        return self._terms.get(e, 0)

    def degree(self) -> int:
        return max(self._terms) if self._terms else -1

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _coerce(self, other) -> "SparsePoly | None":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in o._terms.items():
            acc[e] = acc.get(e, 0) + c
        return SparsePoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SparsePoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        acc: dict[int, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return SparsePoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            return SparsePoly({e * k: c ** k})
        result = SparsePoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coefficients(self, f) -> "SparsePoly":
        return SparsePoly({e: f(c) for e, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: other} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._terms.get(0, 0))
            else:
                self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"SparsePoly({self._terms!r})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: SparsePoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e, c in sorted(f.items(), reverse=True):
        mag = -c if c < 0 else c
        sign = "-" if c < 0 else "+"
        if e == 0:
            body = str(mag)
        else:
            xpart = "X" if e == 1 else f"X^{e}"
            body = xpart if mag == 1 else f"{mag}*{xpart}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(X(?:\s*\^\s*(\d+))?)?\s*")


def parse_poly(text: str) -> SparsePoly:
    """Parse the output of :func:`format_poly` (and mildly looser input)."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    pos = 0
    acc: dict[int, Scalar] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, num, xpart, exp = m.groups()
        if num is None and xpart is None:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r} at offset {pos}")
        c: Scalar = Fraction(num) if num is not None else 1
        if sign == "-":
            c = -c
        e = 0 if xpart is None else (int(exp) if exp is not None else 1)
        acc[e] = acc.get(e, 0) + c
        pos = m.end()
        first = False
    return SparsePoly(acc)
