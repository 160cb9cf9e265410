"""Residual diagnostics over random matlabex-pattern pencils, with summary statistics.

    python scripts/run_table1.py --seeds 200 --csv table1.csv
"""
import argparse
import csv

import numpy as np

from pencilroots.cli import table1_rows
from pencilroots.oracle import ResidualReport


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--refine-iters", type=int, default=2)
    ap.add_argument("--csv", help="also write the rows here")
    args = ap.parse_args()

    rows = table1_rows(args.seeds, args.refine_iters)
    data = np.array([r.as_row() for r in rows]).reshape(-1, len(ResidualReport.FIELDS))
    print(("{:>10}" * len(ResidualReport.FIELDS)).format(*ResidualReport.FIELDS))
    for r in data[:20]:
        print(("{:10.1e}" * len(r)).format(*r))
    if len(data):
        ratio = data[:, 1] / data[:, 0]
        print(f"\nseeds={len(data)}  max Back/(eps kappa)={ratio.max():.2f}  "
              f"(> 10 in {int(np.sum(ratio > 10))})")
        for name, col in (("resN", 3), ("resR", 5)):
            print(f"{name}: median {np.median(data[:, col]):.1e}  max {data[:, col].max():.1e}  "
                  f"(> 1e-11 in {int(np.sum(data[:, col] > 1e-11))})")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ResidualReport.FIELDS)
            w.writerows(data.tolist())


if __name__ == "__main__":
    main()
