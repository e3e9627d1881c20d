#!/usr/bin/env python3
"""Solve the four deterministic example channels and dump their D1 constellations.

Usage: python scripts/reproduce_examples.py [--out DIR]
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from zcnoma import RealZcInstance, oracle_solve, solve, sum_constellation

CASES = {
    "weak": (1.0, 0.5, 1.0),
    "strong-a": (1.0, 1.5, 1.0),
    "strong-b": (1.0, 3.0, 1.0),
    "very-strong": (1.0, 5.0, 0.5),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/examples"))
    ap.add_argument("--M", type=int, default=4)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    print(f"{'case':<12} {'w1':>8} {'w2':>8} {'objective':>10} {'oracle':>10}  branch")
    for name, g in CASES.items():
        inst = RealZcInstance(*g, 1.0, 1.0, args.M)
        sol = solve(inst)
        orc = oracle_solve(inst, 100_000)
        print(f"{name:<12} {sol.w1:8.4f} {sol.w2:8.4f} {sol.objective:10.6f} {orc.objective:10.6f}  {sol.branch}")
        axis = sum_constellation(inst, sol.w1, sol.w2).d1_points
        i, q = np.meshgrid(axis, axis, indexing="ij")
        with open(args.out / f"{name}_d1.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "q"])
            w.writerows(zip(i.ravel().tolist(), q.ravel().tolist()))
    print(f"constellations written to {args.out}/")


if __name__ == "__main__":
    main()
