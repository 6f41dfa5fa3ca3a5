"""Multistart spread of minimizers: strictly convex versus merely convex objectives.

Strict convexity forces every start to the same minimizer; a linear objective
on the simplex has a face of minimizers and the starts spread out over it.
"""

import argparse

import numpy as np

from hilbertopt.functions import CoshSum, Linear, NormSquared, Quadratic
from hilbertopt.minimize import multistart_uniqueness
from hilbertopt.sets import Ball, Box, Simplex


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--starts", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cases = [
        ("NormSquared on ball", NormSquared([2.0, 0.0]), Ball([0.0, 0.0], 1.0)),
        ("CoshSum on box", CoshSum(), Box(-np.ones(5), np.ones(5))),
        ("Quadratic on box", Quadratic(np.array([[2.0, 0.5], [0.5, 1.0]]), [4.0, -3.0]), Box([-1, -1], [1, 1])),
        ("PSD Quadratic on box", Quadratic(np.diag([1.0, 0.0]), [0.0, 0.0]), Box([-1, -1], [1, 1])),
        ("Linear on simplex", Linear([-1.0, -1.0]), Simplex(2)),
    ]
    for name, f, W in cases:
        rep = multistart_uniqueness(f, W, args.starts, seed=args.seed, max_workers=args.workers)
        verdict = "unique" if rep.passed else "spread"
        print(f"{name:22s} declared={f.declared_class.value:16s} max distance={rep.max_distance:.2e} -> {verdict}")


if __name__ == "__main__":
    main()
