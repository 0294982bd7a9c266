"""Generic verification of the Witt-complex relations.

A *model* describes one concrete complex (base, log, or polynomial).  The
runner only uses the element protocol ``+ - *``, ``F V R d iota`` and
``scale``, so the same relation list serves every model.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence


@dataclass
class RelationResult:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        out = {"relation": self.name, "status": "pass" if self.passed else "fail", "checked": self.checked}
        if not self.passed:
            out["failures"] = self.failures
            out["counterexample"] = self.counterexample
        return out


@dataclass
class CheckReport:
    suite: str
    params: dict
    relations: list[RelationResult] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.relations)

    def failed(self) -> list[RelationResult]:
        return [r for r in self.relations if not r.passed]

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "status": "pass" if self.ok else "fail",
            "relations": [r.to_json() for r in self.relations],
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_text(self) -> str:
        head = ", ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [f"{self.suite} ({head}): {'PASS' if self.ok else 'FAIL'}"]
        width = max((len(r.name) for r in self.relations), default=0)
        for r in self.relations:
            status = "pass" if r.passed else "FAIL"
            lines.append(f"  {r.name.ljust(width)}  {status}  [{r.checked} checked]")
            if not r.passed:
                lines.append(f"    counterexample: {r.counterexample}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


class Recorder:
    """Collects pass/fail counts per relation, keeping the first counterexample."""

    def __init__(self):
        self._results: dict[str, RelationResult] = {}

    def result(self, name: str) -> RelationResult:
        if name not in self._results:
            self._results[name] = RelationResult(name)
        return self._results[name]

    def equal(self, name: str, lhs, rhs, context: Callable[[], str] | str = "") -> bool:
        res = self.result(name)
        res.checked += 1
        if lhs == rhs:
            return True
        res.failures += 1
        if res.counterexample is None:
            ctx = context() if callable(context) else context
            res.counterexample = f"{ctx}: lhs = {lhs}, rhs = {rhs}"
        return False

    def truth(self, name: str, ok: bool, context: Callable[[], str] | str = "") -> bool:
        res = self.result(name)
        res.checked += 1
        if not ok:
            res.failures += 1
            if res.counterexample is None:
                res.counterexample = context() if callable(context) else context
        return ok

    def report(self, suite: str, params: dict) -> CheckReport:
        return CheckReport(suite, params, list(self._results.values()))


class ComplexModel(Protocol):
    """What the relation runner needs to know about a concrete complex."""

    p: int
    max_degree: int

    def basis(self, n: int, q: int) -> list: ...
    def random(self, rng: random.Random, n: int, q: int): ...
    def zero(self, n: int, q: int): ...
    def one(self, n: int): ...
    def lam(self, w): ...
    def random_witt(self, rng: random.Random, n: int): ...
    def teich_values(self) -> Sequence: ...
    def lam_teich(self, a, n: int): ...


def _sign(q: int) -> int:
    return -1 if q % 2 else 1


def _samples(model, rng, n, q, extra):
    out = [(x, q) for x in model.basis(n, q)]
    out += [(model.random(rng, n, q), q) for _ in range(extra)]
    return out


def _pairs(a, b, rng, limit):
    pairs = [(x, y) for x in a for y in b]
    if len(pairs) > limit:
        pairs = rng.sample(pairs, limit)
    return pairs


def run_relations(
    model,
    n_max: int,
    seed: int = 0,
    random_count: int = 4,
    pair_limit: int = 400,
    triple_count: int = 60,
    witt_count: int = 8,
    rec: Recorder | None = None,
) -> Recorder:
    """Evaluate every Witt-complex relation at each level ``2 <= n <= n_max``."""
    rec = rec or Recorder()
    rng = random.Random(seed)
    p = model.p
    degrees = range(model.max_degree + 1)
    for n in range(1, n_max + 1):
        S = {q: _samples(model, rng, n, q, random_count) for q in degrees}
        allS = [s for q in degrees for s in S[q]]
        one = model.one(n)

        # lambda is a ring map
        for _ in range(witt_count):
            u, v = model.random_witt(rng, n), model.random_witt(rng, n)
            ctx = lambda: f"n={n}, u={u}, v={v}"
            rec.equal("lambda additive", model.lam(u + v), model.lam(u) + model.lam(v), ctx)
            rec.equal("lambda multiplicative", model.lam(u * v), model.lam(u) * model.lam(v), ctx)
            if n >= 2:
                rec.equal("lambda commutes with F", model.lam(_witt_F(u)), model.lam(u).F(), ctx)
                rec.equal("lambda commutes with R", model.lam(_witt_R(u)), model.lam(u).R(), ctx)
            if n >= 1:
                w = model.random_witt(rng, n)
                rec.equal("lambda commutes with V", model.lam(_witt_V(w)), model.lam(w).V(), lambda: f"n={n}, w={w}")
        rec.equal("lambda(1) = 1", model.lam(_witt_one(p, n, model)), one, f"n={n}")

        # ring structure at level n
        for (x, qx), (y, qy) in _pairs(allS, allS, rng, pair_limit):
            ctx = lambda: f"n={n}, x={x}, y={y}"
            xy = x * y
            rec.equal("graded commutativity", xy, y * x * _sign(qx * qy), ctx)
            rec.equal("Leibniz rule", (xy).d(), x.d() * y + x * y.d() * _sign(qx), ctx)
            if n >= 2:
                rec.equal("F multiplicative", xy.F(), x.F() * y.F(), ctx)
                rec.equal("R multiplicative", xy.R(), x.R() * y.R(), ctx)
            if qx != qy:
                continue
            if n >= 2:
                rec.equal("F additive", (x + y).F(), x.F() + y.F(), ctx)
                rec.equal("R additive", (x + y).R(), x.R() + y.R(), ctx)
            rec.equal("d additive", (x + y).d(), x.d() + y.d(), ctx)
            rec.equal("V additive", (x + y).V(), x.V() + y.V(), ctx)
        eta = model.lam_teich(-1, n) * model.lam_teich(-1, n).d()
        for x, q in allS:
            ctx = lambda: f"n={n}, x={x}"
            rec.equal("unit", one * x, x, ctx)
            rec.equal("iota = multiplication by lambda[-1]dlambda[-1]", x.iota(), eta * x, ctx)
            rec.equal("iota^2 = 0", x.iota().iota(), model.zero(n, q + 2), ctx)
            rec.equal("2 iota = 0", x.iota().scale(2), model.zero(n, q + 1), ctx)
            dd, di, id_ = x.d().d(), x.iota().d(), x.d().iota()
            rec.equal("dd = d iota", dd, di, ctx)
            rec.equal("d iota = iota d", di, id_, ctx)
            vx = x.V()
            rec.equal("Vd = p dV", x.d().V(), vx.d().scale(p), ctx)
            rec.equal("FV = p", vx.F(), x.scale(p), ctx)
            rec.equal("FdV = d + iota", vx.d().F(), x.d() + x.iota(), ctx)
            rec.equal("iota commutes with V", x.iota().V(), vx.iota(), ctx)
            if n >= 2:
                rec.equal("dF = p Fd", x.F().d(), x.d().F().scale(p), ctx)
                rec.equal("iota commutes with F", x.iota().F(), x.F().iota(), ctx)
                rec.equal("R commutes with d", x.d().R(), x.R().d(), ctx)
                rec.equal("R commutes with iota", x.iota().R(), x.R().iota(), ctx)
                rec.equal("R commutes with V", vx.R(), x.R().V(), ctx)
            if n >= 3:
                rec.equal("R commutes with F", x.F().R(), x.R().F(), ctx)

        # relations mixing levels n and n+1
        up = {q: _samples(model, rng, n + 1, q, random_count) for q in degrees}
        allUp = [s for q in degrees for s in up[q]]
        for (x, qx), (y, qy) in _pairs(allS, allUp, rng, pair_limit):
            ctx = lambda: f"x={x}, y={y}"
            rec.equal("V(x)y = V(xF(y))", x.V() * y, (x * y.F()).V(), ctx)
        for (x, qx), (y, qy) in _pairs(allS, allS, rng, pair_limit // 2):
            ctx = lambda: f"x={x}, y={y}"
            rec.equal(
                "V(x)dV(y) = V(xdy) + iota V(xy)",
                x.V() * y.V().d(),
                (x * y.d()).V() + (x * y).V().iota(),
                ctx,
            )

        # Fd lambda[a] = lambda[a]^(p-1) d lambda[a]
        if n >= 2:
            for a in model.teich_values():
                t_n = model.lam_teich(a, n)
                t_m = model.lam_teich(a, n - 1)
                rhs = t_m.d()
                for _ in range(p - 1):
                    rhs = t_m * rhs
                rec.equal("Fd lambda[a] = lambda[a]^(p-1) d lambda[a]", t_n.d().F(), rhs, f"n={n}, a={a}")

        # associativity and distributivity on random triples
        for _ in range(triple_count):
            (x, _qx), (y, qy), (z, qz) = rng.choice(allS), rng.choice(allS), rng.choice(allS)
            ctx = lambda: f"n={n}, x={x}, y={y}, z={z}"
            rec.equal("associativity", (x * y) * z, x * (y * z), ctx)
            if qy == qz:
                rec.equal("distributivity", x * (y + z), x * y + x * z, ctx)
    return rec


def _witt_F(u):
    from .witt_core import frobenius

    return frobenius(u)


def _witt_R(u):
    from .witt_core import restriction

    return restriction(u)


def _witt_V(u):
    from .witt_core import verschiebung

    return verschiebung(u)


def _witt_one(p, n, model):
    from .witt_core import witt_one

    return witt_one(p, n, poly=getattr(model, "polynomial", False))


# ---------------------------------------------------------------- lattices


def hermite_rows(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite reduction of an integer generating set (no unimodular tracking)."""
    rows = [list(v) for v in vectors if any(v)]
    out: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col] != 0]
        dead = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                (nxt if r2[col] else dead).append(r2)
            live = nxt
        if live:
            piv = live[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            out.append(piv)
        rows = [r for r in dead if any(r)]
        col += 1
    return out


def lattice_index(vectors: Sequence[Sequence[int]], dim: int) -> int | None:
    """Index of the span in Z^dim, or ``None`` when the span has lower rank."""
    h = hermite_rows(vectors, dim)
    if len(h) < dim:
        return None
    idx = 1
    for i, r in enumerate(h):
        idx *= r[i]
    return abs(idx)


def subgroup_order(generators: Sequence[Sequence[int]], moduli: Sequence[int]) -> int:
    """Order of the subgroup of ``prod Z/m_i`` generated by ``generators``."""
    dim = len(moduli)
    if dim == 0:
        return 1
    rel = [[m if i == j else 0 for j in range(dim)] for i, m in enumerate(moduli)]
    idx = lattice_index(list(generators) + rel, dim)
    total = 1
    for m in moduli:
        total *= m
    return total // idx
