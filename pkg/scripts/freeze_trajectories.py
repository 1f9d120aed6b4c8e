"""Regenerate tests/fixtures/fractal_trajectories.csv (t = u + 1 + u^-1, n <= 2000)."""

import argparse
from pathlib import Path

from qca_lab.fpoly import parse_poly
from qca_lab.symplectic import ModuleVector, PolyMatrix
from qca_lab.dynamics import weight_trajectory

INITIAL = {"X0": ["1", "0"], "Y0": ["1", "1"], "Z0": ["0", "1"]}
DEFAULT_OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "fractal_trajectories.csv"


def build(steps: int) -> str:
    L = PolyMatrix.palindromic(parse_poly("u + 1 + u^-1"))
    lines = ["observable,n,hamming,support"]
    for name, q in INITIAL.items():
        for s in weight_trajectory(L, ModuleVector(q), steps).samples:
            lines.append(f"{name},{s.n},{s.hamming},{s.support}")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    args.out.write_text(build(args.steps))
    print(f"wrote {args.out}")
