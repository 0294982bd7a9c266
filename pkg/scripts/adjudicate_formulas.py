"""Compare every closed-form product against the reference engine, per type pair.

Also tabulates the p = 2 log rows ``V^i(1) dlog[2]`` against the i-general
display, which is expected to disagree only at i = 1, and checks the
competing readings kept in ``drwitt.alt_readings``.

    python3 scripts/adjudicate_formulas.py --samples 3000 --n-max 5
"""

import argparse
import collections
import random

from drwitt.drw_base import DrwElement
from drwitt.drw_log import general_display_row
from drwitt.drw_poly import PolyModel, poly_mul, reference_mul
from drwitt.formats import drw_body


def products(p: int, samples: int, n_max: int, seed: int):
    rng = random.Random(seed)
    model = PolyModel(p)
    stats = collections.defaultdict(lambda: [0, 0, 0])  # checked, agree, nonzero
    first_bad = {}
    for _ in range(samples):
        n = rng.randint(1, n_max)
        x = model.random(rng, n, rng.randint(0, 2), terms=1)
        y = model.random(rng, n, rng.randint(0, 2), terms=1)
        if x.is_zero() or y.is_zero():
            continue
        key = (next(x.terms())[0], next(y.terms())[0])
        closed, ref = poly_mul(x, y), reference_mul(x, y)
        s = stats[key]
        s[0] += 1
        s[1] += closed == ref
        s[2] += not ref.is_zero()
        if closed != ref and key not in first_bad:
            first_bad[key] = (x, y, closed, ref)
    return stats, first_bad


def log_rows(n_max: int):
    for n in range(2, n_max + 1):
        for i in range(1, n):
            row = DrwElement.v(2, n, i, True) * DrwElement.dlog_gen(2, n)
            disp = general_display_row(n, i)
            yield n, i, row, disp


def alternatives(samples: int, seed: int):
    """Agreement of each competing reading (p = 2) with the reference engine."""
    from drwitt import alt_readings as alt
    from drwitt.drw_base import random_element
    from drwitt.drw_poly import PolyDrwElement as P
    from drwitt.witt_core import valuation

    rng = random.Random(seed)
    tally = collections.Counter()

    def rand(level, q):
        return random_element(rng, 2, level, q, fractions=False)

    for _ in range(samples):
        n = rng.randint(2, 6)
        dc, de = rng.randint(0, 1), rng.randint(0, 1)
        k = rng.choice([1, 3, 5, 7])
        b = rand(n - 1, dc)
        if not b.is_zero():
            ref = P(2, n - 1, dc + 1, t2={k: b}).V()
            tally["V(b[X]^(k-1)d[X]), flipped signs", ref == alt.v_of_type2_odd(b, k, dc)] += 1
        if n < 3:
            continue
        r, s = sorted(rng.sample(range(1, n), 2))
        l, m = rng.choice([1, 3, 5]), rng.choice([1, 3, 5])
        c, e = rand(n - r, dc), rand(n - s, de)
        if not (c.is_zero() or e.is_zero()):
            ref = reference_mul(P(2, n, dc, t3={(r, l): c}), P(2, n, de + 1, t4={(s, m): e}))
            tally["V^r . dV^s (r<s), dV^s term only", ref == alt.p34_r_below_s(c, r, l, dc, e, s, m, de)] += 1
        e1, e2 = rand(n - r, 0), rand(n - s, 0)
        if not (e1.is_zero() or e2.is_zero()):
            ref = reference_mul(P(2, n, 1, t4={(r, l): e1}), P(2, n, 1, t4={(s, m): e2}))
            tally["dV^s . dV^s' (s<s'), term by term", ref == alt.p44_s_below(e1, r, l, 0, e2, s, m, 0)] += 1
        r = rng.randint(2, n - 1)
        if valuation(l + m, 2) < r:
            c, e = rand(n - r, dc), rand(n - r, de)
            if not (c.is_zero() or e.is_zero()):
                ref = reference_mul(P(2, n, dc, t3={(r, l): c}), P(2, n, de + 1, t4={(r, m): e}))
                tally["V^r . dV^r (v<r), dV^r(ce[X]^K')", ref == alt.p34_equal_small_v(c, r, l, dc, e, m, de)] += 1
                tally["V^r . dV^r (v<r), dV^(r-v)(V^v(ce)[X]^K')",
                      ref == alt.p34_equal_small_v_consistent(c, r, l, dc, e, m, de)] += 1
    return tally


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--samples", type=int, default=3000)
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for p in args.p:
        stats, bad = products(p, args.samples, args.n_max, args.seed)
        print(f"p={p}: closed form vs reference")
        for key in sorted(stats):
            checked, agree, nonzero = stats[key]
            print(f"  P{key[0]}.{key[1]}  checked {checked:4d}  agree {agree:4d}  nonzero {nonzero:4d}")
        for key, (x, y, c, r) in bad.items():
            print(f"  disagreement P{key[0]}.{key[1]}: x={x} y={y}\n    closed={c}\n    reference={r}")
    print("p=2 log rows: computed vs i-general display")
    for n, i, row, disp in log_rows(args.n_max + 1):
        mark = "same" if row == disp else "DIFFERS"
        print(f"  n={n} i={i}: {drw_body(row):40s} display: {drw_body(disp):40s} {mark}")
    print("p=2 competing readings vs reference")
    tally = alternatives(args.samples, args.seed)
    for name in sorted({k[0] for k in tally}):
        print(f"  {name:45s} agree {tally[name, True]:4d}  disagree {tally[name, False]:4d}")


if __name__ == "__main__":
    main()
