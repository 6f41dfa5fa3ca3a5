"""Observed order of the finite-difference Dirichlet solve on manufactured solutions.

Solves on grids n, 2n+1, 4n+3, ... by energy minimization and prints the
max-node error against the exact solution and the ratio between successive
grids (about 4 for a second-order stencil).

    python scripts/convergence_order.py --case sin --n0 7 --levels 4
"""

import argparse
import time

from hilbertopt.dirichlet import MANUFACTURED, Manufactured, build_problem, cg_oracle, node_error, solve_energy


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--case", choices=sorted(MANUFACTURED), default="sin")
    ap.add_argument("--n0", type=int, default=7)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--cg", action="store_true", help="use the CG oracle instead of gradient descent")
    args = ap.parse_args()

    dim = MANUFACTURED[args.case][0]
    n, prev = args.n0, None
    print(f"{'n':>6} {'unknowns':>9} {'max error':>12} {'ratio':>7} {'iters':>8} {'secs':>6}")
    for _ in range(args.levels):
        p = build_problem(dim, n, Manufactured(args.case))
        t0 = time.perf_counter()
        if args.cg:
            u, iters = cg_oracle(p), "-"
        else:
            rep = solve_energy(p)
            u, iters = rep.x_star, rep.iterations
        err = node_error(p, u)
        ratio = f"{prev / err:7.3f}" if prev else " " * 7
        print(f"{n:6d} {p.size:9d} {err:12.4e} {ratio} {iters!s:>8} {time.perf_counter() - t0:6.2f}")
        prev, n = err, 2 * n + 1


if __name__ == "__main__":
    main()
