"""Command line front end.

    qca-lab verify CONFIG
    qca-lab classify CONFIG [--horizon N]
    qca-lab weights CONFIG --initial X0 --steps N [--out f.csv] [--svg f.svg]
    qca-lab solitons CONFIG [--n-max N] [--window W]
    qca-lab expect CONFIG --state p=0,theta=30,phi=45 --beta xx:g=1,R=1 \\
        --initial X0 --initial Z0 --steps 10 [--out f.csv | --json]
    qca-lab certify --state p=0.45 [--range R] [--qubits-per-cell N] [--dims d]

CONFIG is a built-in name (see ``registry``) or a .toml / .json file with
keys ``dims``, ``qubits_per_cell`` and ``matrix`` (rows of polynomial
strings), or the shorthand ``t = "<poly>"`` for [[0, 1], [1, t]].

Exit codes: 0 success, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

from .dynamics import classify, classify_palindromic, search_cost, soliton_search, weight_trajectory
from .expectation import BetaSpec, ProductStateParams, certify, expect_series
from .fpoly import LaurentPoly, PolySyntaxError, format_poly, parse_poly
from .pauli import parse_pauli, pauli_to_vec
from .symplectic import (
    NotInvertible,
    PolyMatrix,
    determinant,
    double,
    is_pseudo_unitary,
    mat_inverse_unit,
    matrix_from_config,
)

log = logging.getLogger("qca_lab")

SOLITON_COST_CAP = 200_000


class InputError(Exception):
    pass


@dataclass(frozen=True)
class QcaConfig:
    name: str
    matrix: PolyMatrix
    t: Optional[LaurentPoly] = None
    raw_ca: bool = False

    @property
    def dims(self) -> int:
        return self.matrix.dim

    @property
    def qubits_per_cell(self) -> int:
        return self.matrix.size // 2


def _palindromic(name: str, t: str) -> QcaConfig:
    tp = parse_poly(t)
    return QcaConfig(name, PolyMatrix.palindromic(tp), t=tp)


def registry() -> dict[str, QcaConfig]:
    F = PolyMatrix([["0", "1"], ["1", "u"]])
    G = PolyMatrix([["0", "1"], ["1", "1 + u"]])
    return {
        "glider": _palindromic("glider", "u + u^-1"),
        "fractal": _palindromic("fractal", "u + 1 + u^-1"),
        "periodic": _palindromic("periodic", "1"),
        "shift": QcaConfig("shift", PolyMatrix.scalar(parse_poly("u"), 2)),
        "F": QcaConfig("F", F, raw_ca=True),
        "G": QcaConfig("G", G, raw_ca=True),
        "double-F": QcaConfig("double-F", double(F)),
        "double-G": QcaConfig("double-G", double(G)),
    }


def load_config(ref: str) -> QcaConfig:
    reg = registry()
    if ref in reg:
        return reg[ref]
    path = Path(ref)
    if not path.exists():
        raise InputError(f"{ref!r} is neither a built-in ({', '.join(reg)}) nor a file")
    try:
        if path.suffix == ".toml":
            cfg = tomllib.loads(path.read_text())
        elif path.suffix == ".json":
            cfg = json.loads(path.read_text())
        else:
            raise InputError(f"unknown config extension {path.suffix!r}")
        m = matrix_from_config(cfg)
    except (PolySyntaxError, ValueError, tomllib.TOMLDecodeError) as e:
        raise InputError(f"{ref}: {e}") from e
    t = parse_poly(str(cfg["t"]), int(cfg.get("dims", 1))) if "t" in cfg else None
    return QcaConfig(str(cfg.get("name", path.stem)), m, t=t, raw_ca=bool(cfg.get("raw_ca", False)))


def _require_qca(cfg: QcaConfig) -> None:
    if not is_pseudo_unitary(cfg.matrix):
        if cfg.raw_ca:
            log.warning("%s is not pseudo-unitary; treating it as a raw linear CA", cfg.name)
        else:
            raise InputError(f"{cfg.name} is not pseudo-unitary (set raw_ca = true for a plain CA)")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QCA_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _initial(text: str, cfg: QcaConfig):
    try:
        q = pauli_to_vec(parse_pauli(text, cfg.qubits_per_cell, cfg.dims), cfg.qubits_per_cell, cfg.dims)
    except ValueError as e:
        raise InputError(str(e)) from e
    if not q:
        raise InputError(f"initial observable {text!r} is the identity")
    return q


def svg_lines(series: dict[str, list[tuple[float, float]]], width: int = 640, height: int = 360) -> str:
    """Minimal SVG line plot: one polyline per series, plus axes."""
    pad = 40
    xs = [x for pts in series.values() for x, _ in pts] or [0.0]
    ys = [y for pts in series.values() for _, y in pts] or [0.0]
    x0, x1 = min(xs), max(xs) or 1.0
    y0, y1 = min(0.0, min(ys)), max(ys) or 1.0

    def sx(x):
        return pad + (x - x0) / ((x1 - x0) or 1.0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / ((y1 - y0) or 1.0) * (height - 2 * pad)

    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{height - 10}" font-size="12">{x0:g}</text>',
        f'<text x="{width - pad}" y="{height - 10}" font-size="12">{x1:g}</text>',
        f'<text x="2" y="{pad}" font-size="12">{y1:g}</text>',
    ]
    for i, (name, pts) in enumerate(series.items()):
        c = colours[i % len(colours)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1" points="{coords}"/>')
        parts.append(f'<text x="{width - pad - 60}" y="{pad + 14 * i}" font-size="12" fill="{c}">{name}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)


# -- commands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    m = cfg.matrix
    pu = is_pseudo_unitary(m)
    det = determinant(m)
    try:
        mat_inverse_unit(m)
        invertible = True
    except NotInvertible:
        invertible = False
    report = {
        "name": cfg.name,
        "size": m.size,
        "dims": m.dim,
        "pseudo_unitary": pu,
        "determinant": format_poly(det),
        "invertible": invertible,
    }
    print(json.dumps(report, indent=2))
    return 0 if pu else 1


def cmd_classify(args) -> int:
    if args.horizon < 1:
        raise InputError("horizon must be >= 1")
    cfg = load_config(args.config)
    _require_qca(cfg)
    if cfg.t is not None and cfg.dims == 1 and cfg.t.is_palindromic():
        report = classify_palindromic(cfg.t)
    else:
        report = classify(cfg.matrix, args.horizon, workers=_threads())
    print(json.dumps({"name": cfg.name, **report.to_json()}, indent=2))
    return 0


def cmd_weights(args) -> int:
    if args.steps < 0:
        raise InputError("steps must be >= 0")
    cfg = load_config(args.config)
    _require_qca(cfg)
    traj = weight_trajectory(cfg.matrix, _initial(args.initial, cfg), args.steps)
    _write(traj.to_csv(), args.out)
    if args.svg:
        pts = {
            "hamming": [(s.n, s.hamming) for s in traj.samples],
            "support": [(s.n, s.support) for s in traj.samples],
        }
        _write(svg_lines(pts), args.svg)
    return 0


def cmd_solitons(args) -> int:
    if args.n_max < 1:
        raise InputError("n-max must be >= 1")
    cfg = load_config(args.config)
    _require_qca(cfg)
    cost = search_cost(cfg.matrix, args.n_max)
    if cost > SOLITON_COST_CAP:
        raise InputError(f"search needs {cost} determinants, above the cap of {SOLITON_COST_CAP}")
    w = soliton_search(cfg.matrix, args.n_max, workers=_threads(), window=args.window)
    if w is None:
        print(json.dumps({"name": cfg.name, "witness": None, "horizon": args.n_max,
                          "message": f"none up to horizon {args.n_max}"}, indent=2))
    else:
        print(json.dumps({"name": cfg.name, "witness": w.to_json(), "horizon": args.n_max}, indent=2))
    return 0


def cmd_expect(args) -> int:
    if args.steps < 0:
        raise InputError("steps must be >= 0")
    cfg = load_config(args.config)
    _require_qca(cfg)
    try:
        state = ProductStateParams.parse(args.state)
        beta = BetaSpec.parse(args.beta)
    except ValueError as e:
        raise InputError(str(e)) from e
    initials = args.initial or ["X0", "Y0", "Z0"]
    vectors = [_initial(text, cfg) for text in initials]
    if cfg.qubits_per_cell != 1 or cfg.dims != 1:
        raise InputError("expect needs a 1d QCA with one qubit per cell")

    def run(q):
        return expect_series(cfg.matrix, q, args.steps, state, beta)

    with ThreadPoolExecutor(_threads()) as pool:
        results = list(pool.map(run, vectors))
    if args.json:
        payload = {name: [{"n": n, "letter_word_start": s, "abs_expectation": v} for n, s, v in series]
                   for name, series in zip(initials, results)}
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["observable,n,letter_word_start,abs_expectation"]
        for name, series in zip(initials, results):
            lines += [f"{name},{n},{s},{v:.12g}" for n, s, v in series]
        _write("\n".join(lines) + "\n", args.out)
    if args.svg:
        _write(svg_lines({name: [(n, v) for n, _, v in series]
                          for name, series in zip(initials, results)}), args.svg)
    return 0


def cmd_certify(args) -> int:
    try:
        state = ProductStateParams.parse(args.state)
    except ValueError as e:
        raise InputError(str(e)) from e
    rep = certify(state, args.qubits_per_cell, args.range, args.dims)
    out = rep.to_json()
    if rep.stabilizer:
        out["note"] = "stabilizer state: lambda = 1, not P-generic"
    print(json.dumps(out, indent=2))
    return 0 if rep.certified else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qca-lab", description=__doc__.split("\n\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="pseudo-unitarity, determinant, invertibility")
    p.add_argument("config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="periodic / glider / fractal-like")
    p.add_argument("config")
    p.add_argument("--horizon", type=int, default=8)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("weights", help="Hamming weight and support trajectory as CSV")
    p.add_argument("config")
    p.add_argument("--initial", default="X0")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("solitons", help="search for L^n q = u^k q")
    p.add_argument("config")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--window", type=int, default=4)
    p.set_defaults(func=cmd_solitons)

    p = sub.add_parser("expect", help="|omega_0 o beta (alpha^n (P_q))| series")
    p.add_argument("config")
    p.add_argument("--state", required=True)
    p.add_argument("--beta", default="xx:g=0,R=1")
    p.add_argument("--initial", action="append")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("certify", help="lambda * C_beta < 1 thermalization certificate")
    p.add_argument("--state", required=True)
    p.add_argument("--range", type=int, default=1)
    p.add_argument("--qubits-per-cell", type=int, default=1)
    p.add_argument("--dims", type=int, default=1)
    p.set_defaults(func=cmd_certify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, PolySyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
