"""Classify [[0, 1], [1, t]] for every palindromic t up to a given degree, exactly and by search."""

import argparse
import itertools

from qca_lab.dynamics import brute_force_soliton_oracle, classify, classify_palindromic
from qca_lab.fpoly import LaurentPoly, format_poly
from qca_lab.symplectic import PolyMatrix


def family(max_deg):
    basis = [LaurentPoly.one()] + [LaurentPoly([(m,), (-m,)]) for m in range(1, max_deg + 1)]
    for bits in itertools.product([0, 1], repeat=len(basis)):
        t = LaurentPoly.zero()
        for b, p in zip(bits, basis):
            if b:
                t = t + p
        yield t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-deg", type=int, default=2)
    ap.add_argument("--horizon", type=int, default=6)
    ap.add_argument("--oracle-bound", type=int, default=4)
    args = ap.parse_args()

    print(f"{'t':<28} {'exact':<13} {'search':<13} oracle")
    for t in family(args.max_deg):
        L = PolyMatrix.palindromic(t)
        exact = classify_palindromic(t).verdict
        search = classify(L, args.horizon).verdict
        w = brute_force_soliton_oracle(L, args.horizon, args.oracle_bound)
        oracle = "none" if w is None else f"n={w.n} k={w.k[0]}"
        print(f"{format_poly(t):<28} {exact:<13} {search:<13} {oracle}")


if __name__ == "__main__":
    main()
