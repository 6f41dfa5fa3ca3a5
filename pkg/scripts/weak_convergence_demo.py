"""Basis vectors e_n pair to zero against any fixed vector but keep norm 1.

Contrasts the basis sequence (weak only) with a shrinking sequence e_n / n
(strong) and a constant sequence (neither), in a chosen inner product.
"""

import argparse

import numpy as np

from hilbertopt.space import DiagonalWeighted, Standard, basis_sequence, weak_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--dim", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--weighted", action="store_true", help="use random positive diagonal weights")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    ip = DiagonalWeighted(rng.uniform(0.5, 2.0, args.dim)) if args.weighted else Standard()
    k = min(10, args.dim)
    test = np.r_[rng.standard_normal(k), np.zeros(args.dim - k)]
    basis = list(basis_sequence(args.dim))
    if args.weighted:
        # normalize so the norms are 1 in the chosen inner product
        basis = [e / np.sqrt(ip(e, e)) for e in basis]
    zero = np.zeros(args.dim)
    cases = {
        "basis e_n": basis,
        "shrinking e_n / n": [e / (i + 1) for i, e in enumerate(basis)],
        "constant e_1": [basis[0]] * args.dim,
    }
    for name, seq in cases.items():
        rep = weak_probe(seq, zero, [test], ip)
        print(f"{name:20s} verdict={rep.verdict.value:9s} final pairing={rep.pairings[-1, 0]: .3e} "
              f"final norm={rep.norms[-1]:.3e}")


if __name__ == "__main__":
    main()
