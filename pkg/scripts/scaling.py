"""Wall-clock time of the full analysis on random m x 1.2m pencils.

    python scripts/scaling.py --sizes 50 100 200 400
"""
import argparse
import time

import numpy as np

from pencilroots import AnalyzeConfig, Pencil, analyze


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--repeats", type=int, default=2)
    ap.add_argument("--no-left", action="store_true", help="skip the transposed run")
    args = ap.parse_args()

    cfg = AnalyzeConfig(left=not args.no_left)
    prev = None
    print(f"{'m x n':>12} {'seconds':>9} {'ratio':>7}")
    for m in args.sizes:
        n = int(round(1.2 * m))
        rng = np.random.default_rng(m)
        p = Pencil(rng.standard_normal((m, n)), rng.standard_normal((m, n)))
        best = np.inf
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            analyze(p, 0.0, cfg)
            best = min(best, time.perf_counter() - t0)
        ratio = f"{best / prev:7.1f}" if prev else " " * 7
        print(f"{m:>5} x {n:<5} {best:9.3f} {ratio}")
        prev = best


if __name__ == "__main__":
    main()
