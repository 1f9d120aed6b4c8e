"""Support and Hamming weight of X0, Y0, Z0 under the fractal QCA (CSV + SVG per observable)."""

import argparse
from pathlib import Path

from qca_lab.cli import svg_lines
from qca_lab.dynamics import weight_trajectory
from qca_lab.fpoly import parse_poly
from qca_lab.symplectic import ModuleVector, PolyMatrix

INITIAL = {"X0": ["1", "0"], "Y0": ["1", "1"], "Z0": ["0", "1"]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", default="u + 1 + u^-1", help="palindromic t(u)")
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--outdir", type=Path, default=Path("figures"))
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    L = PolyMatrix.palindromic(parse_poly(args.t))
    for name, q in INITIAL.items():
        traj = weight_trajectory(L, ModuleVector(q), args.steps)
        (args.outdir / f"weights_{name}.csv").write_text(traj.to_csv())
        svg = svg_lines({"support": [(s.n, s.support) for s in traj.samples]})
        (args.outdir / f"weights_{name}.svg").write_text(svg)
        print(f"{name}: max support {max(traj.support())}, max weight {max(traj.hamming())}")


if __name__ == "__main__":
    main()
