"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad flags or unparsable input,
3 a ghost vector has no integral preimage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import formats as fmt
from .axioms import CheckReport, RelationResult
from .drw_base import (
    DrwElement,
    basis,
    check_axioms,
    filtration_check,
    group_structure,
    lambda_from_witt,
    lambda_teichmuller,
    pd_failure_check,
)
from .polynomial import parse_poly
from .witt_core import (
    GhostVector,
    LengthTooShort,
    NonIntegralGhost,
    WittVector,
    ghost,
    teichmuller,
    unghost,
    v_basis_decompose,
)

PRIMES = (2, 3, 5)
MAX_LEVEL = 16


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    prime: int = 2
    level: int = 4
    mode: str = "plain"      # plain | log | poly
    seed: int = 0
    output: str = "text"     # text | json
    fuel: int | None = None
    jmax: int = 6
    degree: int | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CliConfig":
        if ns.n < 1 or ns.n > MAX_LEVEL:
            raise UsageError(f"--n must be between 1 and {MAX_LEVEL}")
        if ns.seed < 0:
            raise UsageError("--seed must be non-negative")
        if ns.fuel is not None and ns.fuel < 1:
            raise UsageError("--fuel must be >= 1")
        if ns.jmax < 1:
            raise UsageError("--jmax must be >= 1")
        mode = "poly" if getattr(ns, "poly", False) else ("log" if ns.log else "plain")
        if ns.log and getattr(ns, "poly", False):
            raise UsageError("--log and --poly are exclusive")
        return cls(ns.p, ns.n, mode, ns.seed, "json" if ns.json else "text", ns.fuel, ns.jmax, ns.q)

    @property
    def log(self) -> bool:
        return self.mode == "log"


# ---------------------------------------------------------------- rendering


def _emit(cfg: CliConfig, text: str, obj) -> None:
    if cfg.output == "json":
        print(json.dumps(obj, indent=2, ensure_ascii=False))
    else:
        print(text)


def _tuple_json(values):
    return [fmt.scalar_to_json(v) if not hasattr(v, "items") else fmt.format_poly(v) for v in values]


def _superscript(k: int) -> str:
    return "" if k == 1 else str(k).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))


# ---------------------------------------------------------------- witt


def _component(text: str):
    return parse_poly(text) if "X" in text else fmt.parse_scalar(text)


def _components(cfg: CliConfig, items, count: int):
    if len(items) != count:
        raise UsageError(f"expected {count} components, got {len(items)}")
    try:
        return [_component(s) for s in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse components: {exc}") from None


def cmd_witt(cfg: CliConfig, op: str, args: list[str]) -> int:
    p, n = cfg.prime, cfg.level
    if op in ("add", "mul"):
        vals = _components(cfg, args, 2 * n)
        u, v = WittVector(p, tuple(vals[:n])), WittVector(p, tuple(vals[n:]))
        w = u + v if op == "add" else u * v
        _emit(cfg, fmt.tuple_to_text(w.components), fmt.witt_to_json(w))
    elif op == "teich":
        (a,) = _components(cfg, args, 1)
        w = teichmuller(a, n, p)
        _emit(cfg, fmt.tuple_to_text(w.components), fmt.witt_to_json(w))
    elif op == "ghost":
        w = WittVector(p, tuple(_components(cfg, args, n)))
        g = ghost(w).entries
        _emit(cfg, fmt.tuple_to_text(g), {"type": "ghost", "p": p, "n": n, "entries": _tuple_json(g)})
    elif op == "unghost":
        g = GhostVector(p, tuple(_components(cfg, args, n)))
        w = unghost(g)
        _emit(cfg, fmt.tuple_to_text(w.components), fmt.witt_to_json(w))
    elif op == "decompose":
        w = WittVector(p, tuple(_components(cfg, args, n)))
        c = v_basis_decompose(w)
        _emit(cfg, fmt.decomposition_to_text(c),
              {"type": "v_basis", "p": p, "n": n, "coefficients": _tuple_json(c)})
    else:
        raise UsageError(f"unknown witt operation {op!r}")
    return 0


# ---------------------------------------------------------------- drw / log


UNARY = ("F", "V", "R", "d", "iota")


def _parse_drw(cfg: CliConfig, text: str) -> DrwElement:
    try:
        return fmt.parse_drw(text, cfg.prime, cfg.level, cfg.log)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _apply_unary(x, op: str):
    return {"F": x.F, "V": x.V, "R": x.R, "d": x.d, "iota": x.iota}[op]()


def cmd_drw(cfg: CliConfig, op: str, args: list[str]) -> int:
    p, n, log = cfg.prime, cfg.level, cfg.log
    if op == "mul":
        if len(args) != 2:
            raise UsageError("mul takes two elements")
        out = _parse_drw(cfg, args[0]) * _parse_drw(cfg, args[1])
    elif op in UNARY:
        if len(args) != 1:
            raise UsageError(f"{op} takes one element")
        out = _apply_unary(_parse_drw(cfg, args[0]), op)
    elif op == "show":
        if len(args) != 1:
            raise UsageError("show takes one element")
        out = _parse_drw(cfg, args[0])
    elif op == "teich":
        (a,) = _components(cfg, args, 1)
        out = lambda_teichmuller(a, n, p, log)
    elif op == "lambda":
        w = WittVector(p, tuple(_components(cfg, args, n)))
        out = lambda_from_witt(w, log)
    elif op == "rows" and log:
        return _log_rows(cfg)
    elif op == "relation" and log:
        from .drw_log import log_relation

        lhs, rhs = log_relation(p, n)
        ok = lhs == rhs
        text = f"[{p}] dlog[{p}] = {fmt.drw_to_text(lhs)}\nd[{p}]         = {fmt.drw_to_text(rhs)}\n{'PASS' if ok else 'FAIL'}"
        _emit(cfg, text, {"lhs": fmt.drw_to_json(lhs), "rhs": fmt.drw_to_json(rhs), "status": "pass" if ok else "fail"})
        return 0 if ok else 1
    else:
        raise UsageError(f"unknown {'log' if log else 'drw'} operation {op!r}")
    _emit(cfg, fmt.drw_to_text(out), fmt.drw_to_json(out))
    return 0


def _log_rows(cfg: CliConfig) -> int:
    p, n = cfg.prime, cfg.level
    lines, rows = [], []
    for i in range(n):
        x = DrwElement.v(p, n, i, True) * DrwElement.dlog_gen(p, n)
        label = "[1]" if i == 0 else ("V(1)" if i == 1 else f"V^{i}(1)")
        lines.append(f"{label} · dlog[{p}] = {fmt.drw_body(x)}")
        rows.append({"i": i, "product": fmt.drw_to_json(x)})
    _emit(cfg, f"@ {{p={p}, n={n}, log}}\n" + "\n".join(lines), {"p": p, "n": n, "rows": rows})
    return 0


# ---------------------------------------------------------------- poly


def _parse_poly_elem(cfg: CliConfig, text: str):
    if "@" in text or cfg.degree is not None:
        degrees = [None if "@" in text else cfg.degree]
    else:
        degrees = [0, 1, 2]
    err = None
    for q in degrees:
        try:
            return fmt.parse_poly_drw(text, cfg.prime, cfg.level, q)
        except (ValueError, ZeroDivisionError) as exc:
            err = err or exc
    raise UsageError(str(err))


def cmd_poly(cfg: CliConfig, op: str, args: list[str]) -> int:
    from .drw_poly import PolyDrwElement, poly_lambda

    p, n = cfg.prime, cfg.level
    if op == "mul":
        if len(args) != 2:
            raise UsageError("mul takes two elements")
        out = _parse_poly_elem(cfg, args[0]) * _parse_poly_elem(cfg, args[1])
    elif op in UNARY:
        if len(args) != 1:
            raise UsageError(f"{op} takes one element")
        out = _apply_unary(_parse_poly_elem(cfg, args[0]), op)
    elif op == "show":
        if len(args) != 1:
            raise UsageError("show takes one element")
        out = _parse_poly_elem(cfg, args[0])
    elif op == "teich":
        (a,) = _components(cfg, args, 1)
        out = poly_lambda(teichmuller(a if hasattr(a, "items") else parse_poly(str(a)), n, p))
    elif op == "lambda":
        vals = [v if hasattr(v, "items") else parse_poly(str(v)) for v in _components(cfg, args, n)]
        out = poly_lambda(WittVector(p, tuple(vals)))
    elif op == "generators":
        out = None
        items = [PolyDrwElement.X(p, n), PolyDrwElement.dX(p, n)]
        _emit(cfg, "\n".join(fmt.poly_to_text(x) for x in items), [fmt.poly_to_json(x) for x in items])
        return 0
    else:
        raise UsageError(f"unknown poly operation {op!r}")
    _emit(cfg, fmt.poly_to_text(out), fmt.poly_to_json(out))
    return 0


# ---------------------------------------------------------------- tables


def _group_text(p: int, n: int, log: bool) -> tuple[str, dict]:
    gs = group_structure(p, n, log)
    rank = gs["deg0"]["rank"]
    deg0 = f"ℤ{_superscript(rank)}"
    parts = [f"ℤ/{t}" for t in gs["deg1"]["torsion"]]
    if log:
        parts[-1] += f"·dlog[{p}]"
    deg1 = " ⊕ ".join(parts) if parts else "0"
    obj = {"p": p, "n": n, "log": log, **gs}
    return f"deg0: {deg0}\ndeg1: {deg1}", obj


def _basis_label(x: DrwElement) -> str:
    return fmt.drw_body(x)


def cmd_table(cfg: CliConfig, kind: str) -> int:
    p, n, log = cfg.prime, cfg.level, cfg.log
    if kind == "groups":
        text, obj = _group_text(p, n, log)
        _emit(cfg, text, obj)
        return 0
    gens = basis(p, n, 0, log) + basis(p, n, 1, log)
    lines = [f"@ {{p={p}, n={n}{', log' if log else ''}}}"]
    if kind == "operators":
        lines.append(f"# V lands at level {n + 1}; F and R land at level {n - 1}")
    rows = []
    if kind == "products":
        for i, x in enumerate(gens):
            for y in gens[i:]:
                z = x * y
                lines.append(f"{_basis_label(x)} · {_basis_label(y)} = {fmt.drw_body(z)}")
                rows.append({"x": _basis_label(x), "y": _basis_label(y), "product": fmt.drw_to_json(z)})
    elif kind == "operators":
        for x in gens:
            entry = {"x": _basis_label(x)}
            for op in ("F", "V", "R", "d", "iota"):
                if op in ("F", "R") and n < 2:
                    continue
                z = _apply_unary(x, op)
                lines.append(f"{op}({_basis_label(x)}) = {fmt.drw_body(z)}")
                entry[op] = fmt.drw_to_json(z)
            rows.append(entry)
    else:
        raise UsageError(f"unknown table {kind!r}")
    _emit(cfg, "\n".join(lines), {"p": p, "n": n, "log": log, "kind": kind, "rows": rows})
    return 0


# ---------------------------------------------------------------- checks


def merge_reports(suite: str, params: dict, tagged: list[tuple[str, CheckReport]]) -> CheckReport:
    """Pool relation counts across several runs; counterexamples keep their run tag."""
    merged: dict[str, RelationResult] = {}
    for tag, rep in tagged:
        for r in rep.relations:
            m = merged.setdefault(r.name, RelationResult(r.name))
            m.checked += r.checked
            m.failures += r.failures
            if r.counterexample and m.counterexample is None:
                m.counterexample = f"[{tag}] {r.counterexample}"
    return CheckReport(suite, params, list(merged.values()))


def _logcoeffs(cfg: CliConfig) -> int:
    from .drw_log import brute_force_log_coefficients, solve_log_coefficients

    if cfg.prime != 2:
        raise UsageError("the log coefficient system exists only for p = 2")
    sol = solve_log_coefficients(cfg.jmax)
    brute = brute_force_log_coefficients(cfg.jmax)
    ok = brute == sol.residues
    t = fmt.tuple_to_text
    text = "\n".join([
        f"log coefficients (p=2, jmax={cfg.jmax})",
        f"  moduli:           {t(sol.moduli)}",
        f"  residues:         {t(sol.residues)}",
        f"  balanced:         {t(sol.balanced)}",
        f"  integer solution: {t(sol.integers)}",
        f"  independent search: {t(brute)}",
        f"status: {'PASS' if ok else 'FAIL'}",
    ])
    obj = {**sol.to_json(), "independent_search": list(brute), "status": "pass" if ok else "fail"}
    _emit(cfg, text, obj)
    return 0 if ok else 1


def cmd_check(cfg: CliConfig, suite: str) -> int:
    p, n, seed = cfg.prime, cfg.level, cfg.seed
    if suite == "logcoeffs":
        return _logcoeffs(cfg)
    if suite == "axioms":
        if cfg.mode == "poly":
            from .drw_poly import check_poly_witt_axioms

            report = check_poly_witt_axioms(p, n, fuel=cfg.fuel or 4, seed=seed)
        else:
            if n < 2:
                raise UsageError("axioms need --n >= 2")
            report = check_axioms(p, n, seed=seed, log=cfg.log)
    elif suite == "associativity":
        from .drw_poly import check_associativity

        if n < 4:
            raise UsageError("the associativity sweep needs --n >= 4 to realise every level ordering")
        report = check_associativity(p, n, fuel=cfg.fuel or 200, seed=seed)
    elif suite == "filtration":
        runs = [(f"n={m},s={s}", filtration_check(p, m, s, cfg.log)) for m in range(2, n + 1) for s in range(1, m)]
        report = merge_reports("filtration", {"p": p, "n_max": n, "log": cfg.log}, runs)
    elif suite == "pd":
        if p != 2:
            raise UsageError("the PD-failure check is stated for p = 2")
        count = cfg.fuel or 200
        runs = [(f"n={m}", pd_failure_check(p, m, count, seed)) for m in range(2, n + 1)]
        report = merge_reports("pd", {"p": p, "n_max": n, "count": count, "seed": seed}, runs)
    else:
        raise UsageError(f"unknown suite {suite!r}")
    _emit(cfg, report.to_text(), report.to_json())
    return 0 if report.ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, choices=PRIMES, help="the prime (default 2)")
    common.add_argument("--n", type=int, default=4, help="level, or the maximal level for checks (default 4)")
    common.add_argument("--log", action="store_true", help="use the log complex")
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    common.add_argument("--fuel", type=int, default=None, help="sample count for randomized checks")
    common.add_argument("--jmax", type=int, default=6, help="rows of the log coefficient system")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--q", type=int, default=None, help="degree of poly elements given without a header")

    parser = argparse.ArgumentParser(prog="drwitt", description="de Rham-Witt computations over Z")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witt", parents=[common], help="Witt vector arithmetic")
    w.add_argument("op", choices=["add", "mul", "teich", "ghost", "unghost", "decompose"])
    w.add_argument("args", nargs="*")

    d = sub.add_parser("drw", parents=[common], help="elements of the de Rham-Witt complex")
    d.add_argument("op", choices=["mul", "show", "teich", "lambda", *UNARY])
    d.add_argument("args", nargs="*")

    lg = sub.add_parser("log", parents=[common], help="elements of the log complex")
    lg.add_argument("op", choices=["mul", "show", "teich", "lambda", "rows", "relation", *UNARY])
    lg.add_argument("args", nargs="*")

    pl = sub.add_parser("poly", parents=[common], help="elements of the polynomial extension")
    pl.add_argument("op", choices=["mul", "show", "teich", "lambda", "generators", *UNARY])
    pl.add_argument("args", nargs="*")

    t = sub.add_parser("table", parents=[common], help="group structure and operation tables")
    t.add_argument("kind", choices=["groups", "products", "operators"])

    c = sub.add_parser("check", parents=[common], help="run a verification suite")
    c.add_argument("suite", choices=["axioms", "associativity", "filtration", "pd", "logcoeffs"])
    c.add_argument("--poly", action="store_true", help="run the axioms in the polynomial extension")
    return parser


def _is_number(text: str) -> bool:
    try:
        fmt.parse_scalar(text)
        return True
    except (ValueError, ZeroDivisionError):
        return False


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if extra:
        if "--" in extra:
            cut = extra.index("--")
            before, after = extra[:cut], extra[cut + 1:]
        else:
            before, after = extra, []
        flags = [e for e in before if e.startswith("-") and not _is_number(e)]
        if flags or not hasattr(ns, "args"):
            print(f"error: unrecognized arguments: {' '.join(flags or extra)}", file=sys.stderr)
            return 2
        ns.args = list(ns.args) + before + after
    try:
        if ns.command == "log":
            ns.log = True
        cfg = CliConfig.from_args(ns)
        if ns.command == "witt":
            return cmd_witt(cfg, ns.op, ns.args)
        if ns.command in ("drw", "log"):
            return cmd_drw(cfg, ns.op, ns.args)
        if ns.command == "poly":
            if cfg.log:
                raise UsageError("the polynomial extension is built over the plain complex")
            return cmd_poly(cfg, ns.op, ns.args)
        if ns.command == "table":
            return cmd_table(cfg, ns.kind)
        return cmd_check(cfg, ns.suite)
    except NonIntegralGhost as exc:
        print(f"error: {exc} (ghost index {exc.index})", file=sys.stderr)
        return 3
    except (UsageError, LengthTooShort, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
