"""Run the associativity sweep and print per-case counts and timing.

    python3 scripts/run_sweep.py --p 2 --n-max 4 --fuel 200
"""

import argparse
import time

from drwitt.drw_poly import check_associativity


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--fuel", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-permute", action="store_true", help="only evaluate the canonical order")
    args = ap.parse_args()
    start = time.perf_counter()
    report = check_associativity(args.p, args.n_max, args.fuel, args.seed, permute=not args.no_permute)
    elapsed = time.perf_counter() - start
    nonzero = report.extra["nonzero_products"]
    width = max(len(r.name) for r in report.relations)
    for r in report.relations:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name.ljust(width)}  {status}  checked {r.checked:5d}  nonzero {nonzero.get(r.name, 0):5d}")
        if not r.passed:
            print(f"    {r.counterexample}")
    print(f"{len(report.relations)} cases, {'all pass' if report.ok else 'FAILURES'}, {elapsed:.1f} s")
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
