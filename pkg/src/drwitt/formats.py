"""Text and JSON forms for Witt vectors and de Rham-Witt elements.

Every ``*_to_text`` / ``*_to_json`` has an exact inverse.  Scalars are written
as integers or ``a/b``; in JSON, integers stay integers and fractions become
strings.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import Scalar, SparsePoly, format_poly, normalize_scalar, parse_poly
from .witt_core import WittVector

# ---------------------------------------------------------------- scalars


def scalar_to_text(c: Scalar) -> str:
    return str(c)


def parse_scalar(text: str) -> Scalar:
    return normalize_scalar(Fraction(text.strip()))


def scalar_to_json(c: Scalar):
    return c if isinstance(c, int) else str(c)


def scalar_from_json(v) -> Scalar:
    if isinstance(v, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return parse_scalar(v)
    raise ValueError(f"not a scalar: {v!r}")


# ---------------------------------------------------------------- Witt vectors


def _component_text(c) -> str:
    return format_poly(c) if isinstance(c, SparsePoly) else scalar_to_text(c)


def witt_to_text(w: WittVector) -> str:
    tag = "" if w.ring == "Z" else f",ring={w.ring}"
    body = ",".join(f"({_component_text(c)})" for c in w.components)
    return f"W{{p={w.p},n={w.n}{tag}}}[{body}]"


_WITT_RE = re.compile(r"^\s*W\{p=(\d+),n=(\d+)(?:,ring=([^}]+))?\}\[(.*)\]\s*$")


def _split_parenthesised(body: str) -> list[str]:
    items, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            if depth > 0:
                cur += ch
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses")
            if depth == 0:
                items.append(cur)
                cur = ""
            else:
                cur += ch
        elif depth > 0:
            cur += ch
        elif ch not in ", \t":
            raise ValueError(f"unexpected character {ch!r} between components")
    if depth:
        raise ValueError("unbalanced parentheses")
    return items


def parse_witt(text: str) -> WittVector:
    m = _WITT_RE.match(text)
    if not m:
        raise ValueError(f"not a Witt vector: {text!r}")
    p, n, ring, body = int(m.group(1)), int(m.group(2)), m.group(3), m.group(4)
    parts = _split_parenthesised(body)
    if len(parts) != n:
        raise ValueError(f"header says n={n} but {len(parts)} components given")
    poly = ring is not None and ring.endswith("[X]")
    comps = tuple(parse_poly(s) if poly else parse_scalar(s) for s in parts)
    return WittVector(p, comps)


def witt_to_json(w: WittVector) -> dict:
    if w.is_polynomial:
        comps = [format_poly(c) for c in w.components]
    else:
        comps = [scalar_to_json(c) for c in w.components]
    return {"type": "witt", "p": w.p, "n": w.n, "ring": w.ring, "components": comps}


def witt_from_json(obj: dict) -> WittVector:
    ring = obj.get("ring", "Z")
    if ring.endswith("[X]"):
        comps = tuple(parse_poly(c) for c in obj["components"])
    else:
        comps = tuple(scalar_from_json(c) for c in obj["components"])
    if len(comps) != obj["n"]:
        raise ValueError("length mismatch")
    return WittVector(obj["p"], comps)


def tuple_to_text(values) -> str:
    return "(" + ",".join(_component_text(c) for c in values) + ")"


def decomposition_to_text(coeffs) -> str:
    """``c_0·[1] + c_1·V(1) + ...`` with zero terms omitted; every coefficient shown."""
    parts = []
    for s, c in enumerate(coeffs):
        if c == 0:
            continue
        basis = "[1]" if s == 0 else ("V(1)" if s == 1 else f"V^{s}(1)")
        parts.append((c, basis))
    if not parts:
        return "0"
    out = ""
    for k, (c, basis) in enumerate(parts):
        if k == 0:
            out = f"{c}·{basis}"
        elif c < 0:
            out += f" - {-c}·{basis}"
        else:
            out += f" + {c}·{basis}"
    return out


# ---------------------------------------------------------------- drw elements


def _basis_v(i: int) -> str:
    return "[1]" if i == 0 else ("V(1)" if i == 1 else f"V^{i}(1)")


def _basis_dv(i: int) -> str:
    return "dV(1)" if i == 1 else f"dV^{i}(1)"


def _join_terms(terms: list[tuple[Scalar, str]]) -> str:
    if not terms:
        return "0"
    out = ""
    for k, (c, basis) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        body = basis if mag == 1 else f"{mag}·{basis}"
        if k == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def drw_terms(x) -> list[tuple[Scalar, str]]:
    terms: list[tuple[Scalar, str]] = [(c, _basis_v(i)) for i, c in enumerate(x.deg0) if c]
    if x.log and x.dlog:
        terms.append((x.dlog, f"dlog[{x.p}]"))
    terms += [(e, _basis_dv(i)) for i, e in enumerate(x.deg1, start=1) if e]
    return terms


def drw_body(x) -> str:
    """Element text without the ``@ {...}`` header."""
    return _join_terms(drw_terms(x))


def drw_to_text(x) -> str:
    tag = ", log" if x.log else ""
    return f"{drw_body(x)} @ {{p={x.p}, n={x.n}{tag}}}"


_HEADER_RE = re.compile(r"@\s*\{\s*p=(\d+)\s*,\s*n=(\d+)\s*(?:,\s*(log))?\s*\}\s*$")
_DRW_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\d+(?:/\d+)?)\s*(?:[·*]\s*)?)?"
    r"(?P<basis>\[1\]|dV(?:\^(?P<dvexp>\d+))?\(1\)|V(?:\^(?P<vexp>\d+))?\(1\)|dlog\[(?P<logp>\d+)\])?\s*"
)


def parse_drw(text: str, p: int | None = None, n: int | None = None, log: bool | None = None):
    """Parse ``drw_to_text`` output; the header may be replaced by explicit p, n, log."""
    from .drw_base import DrwElement

    body = text.strip()
    m = _HEADER_RE.search(body)
    if m:
        hp, hn, hlog = int(m.group(1)), int(m.group(2)), m.group(3) is not None
        if (p is not None and p != hp) or (n is not None and n != hn):
            raise ValueError("header disagrees with the given p, n")
        p, n = hp, hn
        log = hlog or bool(log)
        body = body[: m.start()].strip()
    if p is None or n is None:
        raise ValueError("prime and level are required")
    log = bool(log)
    deg0: list = [0] * n
    deg1: list = [0] * (n - 1)
    dl = 0
    if body == "0":
        return DrwElement(p, n, log=log)
    pos, first = 0, True
    while pos < len(body):
        t = _DRW_TERM.match(body, pos)
        if t is None or t.end() == pos:
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        if t.group("coef") is None and t.group("basis") is None:
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        if t.group("sign") is None and not first:
            raise ValueError(f"missing operator in {text!r} at offset {pos}")
        c: Scalar = parse_scalar(t.group("coef")) if t.group("coef") else 1
        if t.group("sign") == "-":
            c = -c
        basis = t.group("basis") or "[1]"
        if basis == "[1]":
            deg0[0] += c
        elif basis.startswith("dlog"):
            if int(t.group("logp")) != p:
                raise ValueError(f"dlog[{t.group('logp')}] in a p={p} element")
            if not log:
                raise ValueError("dlog term in a non-log element")
            dl += c
        elif basis.startswith("dV"):
            i = int(t.group("dvexp") or 1)
            if not 1 <= i < n:
                raise ValueError(f"dV^{i}(1) does not exist at level {n}")
            deg1[i - 1] += c
        else:
            i = int(t.group("vexp") or 1)
            if not 0 <= i < n:
                raise ValueError(f"V^{i}(1) does not exist at level {n}")
            deg0[i] += c
        pos, first = t.end(), False
    return DrwElement(p, n, deg0=deg0, deg1=deg1, dlog=dl, log=log)


def drw_to_json(x) -> dict:
    out = {
        "type": "drw",
        "p": x.p,
        "n": x.n,
        "log": x.log,
        "deg0": [scalar_to_json(c) for c in x.deg0],
        "deg1": {"residues": list(x.deg1), "moduli": [x.p ** i for i in range(1, x.n)]},
    }
    if x.log:
        out["dlog"] = {"residue": x.dlog, "modulus": x.p ** x.n}
    return out


def drw_from_json(obj: dict):
    from .drw_base import DrwElement

    p, n, log = obj["p"], obj["n"], bool(obj.get("log", False))
    deg1 = obj["deg1"]["residues"] if isinstance(obj["deg1"], dict) else obj["deg1"]
    dl = obj["dlog"]["residue"] if log and "dlog" in obj else 0
    return DrwElement(p, n, deg0=[scalar_from_json(c) for c in obj["deg0"]], deg1=deg1, dlog=dl, log=log)


# ---------------------------------------------------------------- P(E) elements


def _coeff_text(e) -> str:
    body = drw_body(e)
    terms = drw_terms(e)
    if len(terms) > 1 or body.startswith("-"):
        return f"({body})"
    return body


def _power(exp: int) -> str:
    return f"[X]^{exp}"


def poly_term_text(kind: int, key, e) -> str:
    c = _coeff_text(e)
    if kind == 1:
        return f"{c}·{_power(key)}"
    if kind == 2:
        return f"{c}·{_power(key - 1)}·d[X]"
    level, exp = key
    op = ("V" if kind == 3 else "dV") + ("" if level == 1 else f"^{level}")
    return f"{op}({c}·{_power(exp)})"


def poly_body(x) -> str:
    parts = [poly_term_text(kind, key, e) for kind, key, e in x.terms()]
    return " + ".join(parts) if parts else "0"


def poly_to_text(x) -> str:
    return f"{poly_body(x)} @ {{p={x.p}, n={x.n}, q={x.q}}}"


_POLY_HEADER = re.compile(r"@\s*\{\s*p=(\d+)\s*,\s*n=(\d+)\s*,\s*q=(\d+)\s*\}\s*$")
_OUTER = re.compile(r"^(dV|V)(?:\^(\d+))?\((.*)\)$", re.S)


def _split_top(body: str) -> list[str]:
    """Split on `` + `` outside parentheses."""
    out, depth, cur, i = [], 0, "", 0
    while i < len(body):
        ch = body[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and body.startswith(" + ", i):
            out.append(cur)
            cur, i = "", i + 3
            continue
        cur += ch
        i += 1
    out.append(cur)
    return [s.strip() for s in out]


def _parse_coeff(text: str, p: int, level: int):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return parse_drw(text, p, level)


def _split_power(text: str) -> tuple[str, int]:
    head, sep, exp = text.rpartition("·[X]^")
    if not sep or not exp.isdigit():
        raise ValueError(f"expected '·[X]^k' in {text!r}")
    return head, int(exp)


def parse_poly_drw(text: str, p: int | None = None, n: int | None = None, q: int | None = None):
    """Inverse of :func:`poly_to_text`; ``*`` is accepted for ``·``."""
    from .drw_poly import PolyDrwElement

    body = text.strip().replace("*", "·")
    m = _POLY_HEADER.search(body)
    if m:
        hp, hn, hq = map(int, m.groups())
        for given, hv in ((p, hp), (n, hn), (q, hq)):
            if given is not None and given != hv:
                raise ValueError("header disagrees with the given p, n, q")
        p, n, q = hp, hn, hq
        body = body[: m.start()].strip()
    if p is None or n is None or q is None:
        raise ValueError("prime, level and degree are required")
    maps: list[dict] = [{}, {}, {}, {}]

    def put(kind, key, e):
        cur = maps[kind].get(key)
        maps[kind][key] = e if cur is None else cur + e

    if body == "0":
        return PolyDrwElement.zero(p, n, q)
    for term in _split_top(body):
        outer = _OUTER.match(term)
        if outer:
            kind = 3 if outer.group(1) == "V" else 4
            level = int(outer.group(2) or 1)
            head, exp = _split_power(outer.group(3))
            if not 1 <= level < n:
                raise ValueError(f"{outer.group(1)}^{level} does not exist at level {n}")
            put(kind - 1, (level, exp), _parse_coeff(head, p, n - level))
        elif term.endswith("·d[X]"):
            head, exp = _split_power(term[: -len("·d[X]")])
            put(1, exp + 1, _parse_coeff(head, p, n))
        else:
            head, exp = _split_power(term)
            put(0, exp, _parse_coeff(head, p, n))
    maps = [{k: v for k, v in mp.items() if not v.is_zero()} for mp in maps]
    return PolyDrwElement(p, n, q, *maps)


def poly_to_json(x) -> dict:
    def entry(fields, e):
        return {**fields, "coeff": drw_to_json(e)}

    return {
        "type": "poly_drw",
        "p": x.p,
        "n": x.n,
        "q": x.q,
        "type1": [entry({"j": j}, e) for j, e in sorted(x.t1.items())],
        "type2": [entry({"k": k}, e) for k, e in sorted(x.t2.items())],
        "type3": [entry({"r": r, "l": l}, e) for (r, l), e in sorted(x.t3.items())],
        "type4": [entry({"s": s, "m": m}, e) for (s, m), e in sorted(x.t4.items())],
    }


def poly_from_json(obj: dict):
    from .drw_poly import PolyDrwElement

    return PolyDrwElement(
        obj["p"], obj["n"], obj["q"],
        t1={d["j"]: drw_from_json(d["coeff"]) for d in obj.get("type1", [])},
        t2={d["k"]: drw_from_json(d["coeff"]) for d in obj.get("type2", [])},
        t3={(d["r"], d["l"]): drw_from_json(d["coeff"]) for d in obj.get("type3", [])},
        t4={(d["s"], d["m"]): drw_from_json(d["coeff"]) for d in obj.get("type4", [])},
    )
