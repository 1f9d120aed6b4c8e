"""|omega_0 o beta(alpha^n(P))| for X0, Y0, Z0 at the three published state choices."""

import argparse
import time
from pathlib import Path

from qca_lab.cli import svg_lines
from qca_lab.expectation import BetaSpec, ProductStateParams, expect_series
from qca_lab.fpoly import parse_poly
from qca_lab.symplectic import ModuleVector, PolyMatrix

INITIAL = {"X0": ["1", "0"], "Y0": ["1", "1"], "Z0": ["0", "1"]}
STATES = {"fig4": 0.0, "fig5": 0.1, "fig6": 0.4}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--g", type=float, default=1.0, help="XX coupling angle (radians)")
    ap.add_argument("--theta", type=float, default=30.0)
    ap.add_argument("--phi", type=float, default=45.0)
    ap.add_argument("--outdir", type=Path, default=Path("figures"))
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    L = PolyMatrix.palindromic(parse_poly("u + 1 + u^-1"))
    beta = BetaSpec(args.g)
    for tag, p in STATES.items():
        state = ProductStateParams(p, args.theta, args.phi)
        t0 = time.perf_counter()
        rows, series = ["observable,n,abs_expectation"], {}
        for name, q in INITIAL.items():
            s = expect_series(L, ModuleVector(q), args.steps, state, beta)
            series[name] = [(n, v) for n, _, v in s]
            rows += [f"{name},{n},{v:.12g}" for n, _, v in s]
            tail = max(v for n, _, v in s if n >= min(10, args.steps))
            print(f"{tag} p={p} {name}: max |<P>| for n >= 10: {tail:.3e}")
        (args.outdir / f"thermalization_{tag}.csv").write_text("\n".join(rows) + "\n")
        (args.outdir / f"thermalization_{tag}.svg").write_text(svg_lines(series))
        print(f"{tag}: {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
