"""Orbits of a linear CA, mixing and soliton tests, and classifiers.

``mixing_test`` and ``soliton_search`` refute exactly but only confirm up to
the horizon they were given; reports carry that horizon.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence

from .fpoly import LaurentPoly, exponent_set, format_poly, support_union
from .symplectic import (
    ModuleVector,
    PolyMatrix,
    determinant,
    mat_apply,
    mat_pow,
    minus_monomial,
    powers,
)

PERIODIC = "periodic"
GLIDER = "glider"
FRACTAL = "fractal-like"

BRUTE_FORCE_MAX_UNKNOWNS = 4096


class Sample(NamedTuple):
    n: int
    hamming: int
    support: int


@dataclass
class Trajectory:
    samples: list

    def hamming(self) -> list[int]:
        return [s.hamming for s in self.samples]

    def support(self) -> list[int]:
        return [s.support for s in self.samples]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "hamming", "support"])
        w.writerows(self.samples)
        return buf.getvalue()


def support_size(q: ModuleVector) -> int:
    """Number of distinct sites touched by any entry of q."""
    return support_union(q.entries)


def orbit(L: PolyMatrix, q: ModuleVector, steps: int) -> Iterator[tuple[int, ModuleVector]]:
    """Yield (n, L^n q) for n = 0..steps by repeated application."""
    yield 0, q
    for n in range(1, steps + 1):
        q = mat_apply(L, q)
        yield n, q


def weight_trajectory(L: PolyMatrix, q: ModuleVector, steps: int) -> Trajectory:
    if not q:
        raise ValueError("initial vector must be nonzero")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    return Trajectory([Sample(n, v.total_weight(), support_size(v)) for n, v in orbit(L, q, steps)])


# -- mixing ---------------------------------------------------------------------

@dataclass(frozen=True)
class MixingVerdict:
    period: Optional[int]
    horizon: int

    @property
    def is_mixing(self) -> bool:
        """True means no periodic power was found up to the horizon."""
        return self.period is None


def mixing_test(L: PolyMatrix, n_max: int) -> MixingVerdict:
    """First n <= n_max with det(L^n - 1) = 0."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    zero_k = (0,) * L.dim
    for n, p in powers(L, n_max):
        if not determinant(minus_monomial(p, zero_k)):
            return MixingVerdict(n, n_max)
    return MixingVerdict(None, n_max)


# -- solitons -------------------------------------------------------------------

@dataclass(frozen=True)
class SolitonWitness:
    """L^n q = u^k q with q nonzero; checked when constructed."""

    n: int
    k: tuple
    q: ModuleVector
    L: PolyMatrix = field(repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("soliton period must be positive")
        if not self.q:
            raise ValueError("soliton vector must be nonzero")
        if mat_apply(mat_pow(self.L, self.n), self.q) != self.q.shift(self.k):
            raise ValueError(f"L^{self.n} q != u^{self.k} q")

    def to_json(self) -> dict:
        k = self.k[0] if len(self.k) == 1 else list(self.k)
        return {"n": self.n, "k": k, "q": self.q.to_strings()}


def cone_offsets(L: PolyMatrix, n: int) -> list[tuple]:
    """Translations k with |k_i| <= n * D_i, in search order.

    Order: smaller |k| first (l1, then componentwise), positive before
    negative for equal magnitude.
    """
    radius = L.max_abs_exponents()
    ranges = [range(-n * r, n * r + 1) for r in radius]
    ks = list(itertools.product(*ranges))
    ks.sort(key=lambda k: (sum(map(abs, k)), tuple(map(abs, k)), tuple(x < 0 for x in k)))
    return ks


def _normalise(q: ModuleVector) -> ModuleVector:
    """Translate q so that its smallest exponent in each variable is 0."""
    exps = exponent_set(q.entries)
    low = tuple(min(c) for c in zip(*exps))
    return q.shift(tuple(-x for x in low))


def _window_unknowns(size: int, dim: int, window: int) -> list[tuple[int, tuple]]:
    box = list(itertools.product(range(-window, window + 1), repeat=dim))
    return [(j, e) for j in range(size) for e in box]


def _rref_nullspace(rows: list[int], ncols: int) -> list[int]:
    """Null space basis of an F2 matrix given as row bitmasks."""
    rows = [r for r in rows if r]
    pivots: list[tuple[int, int]] = []  # (pivot column, row)
    for r in rows:
        for col, pr in pivots:
            if (r >> col) & 1:
                r ^= pr
        if not r:
            continue
        col = (r & -r).bit_length() - 1
        pivots = [(c, pr ^ r if (pr >> col) & 1 else pr) for c, pr in pivots]
        pivots.append((col, r))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = 1 << f
        for c, pr in pivots:
            if (pr >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def _vector_from_mask(mask: int, unknowns, size: int, dim: int) -> ModuleVector:
    terms: list[list] = [[] for _ in range(size)]
    for i, (j, e) in enumerate(unknowns):
        if (mask >> i) & 1:
            terms[j].append(e)
    return ModuleVector([LaurentPoly(t, dim) for t in terms])


def witness_extract(
    L: PolyMatrix,
    n: int,
    k: Sequence[int],
    window: int,
    power: PolyMatrix | None = None,
) -> Optional[ModuleVector]:
    """A nonzero q with entries in [-window, window]^d and L^n q = u^k q.

    Solves the coefficient system by row reduction and returns the lightest
    basis vector of the null space, translated to start at exponent 0.
    None if the window holds no solution.
    """
    k = tuple(k)
    p = power if power is not None else mat_pow(L, n)
    a = minus_monomial(p, k)
    size, dim = a.size, a.dim
    unknowns = _window_unknowns(size, dim, window)
    # equation index: (output row, exponent) -> bit over unknowns
    eqs: dict[tuple, int] = {}
    for col, (j, e) in enumerate(unknowns):
        bit = 1 << col
        for i in range(size):
            entry = a.rows[i][j]
            if entry:
                for t in entry.shift(e).terms:
                    key = (i, t)
                    eqs[key] = eqs.get(key, 0) ^ bit
    basis = _rref_nullspace(list(eqs.values()), len(unknowns))
    if not basis:
        return None
    best = min(basis, key=lambda m: (m.bit_count(), m))
    q = _normalise(_vector_from_mask(best, unknowns, size, dim))
    if mat_apply(p, q) != q.shift(k):
        raise AssertionError("extracted kernel vector failed verification")
    return q


def _window_cap(a: PolyMatrix) -> int:
    return a.size * max(1, max(a.max_abs_exponents())) + 1


def _find_witness(L: PolyMatrix, n: int, k: tuple, p: PolyMatrix, window: int) -> SolitonWitness:
    cap = _window_cap(minus_monomial(p, k))
    while True:
        q = witness_extract(L, n, k, min(window, cap), power=p)
        if q is not None:
            return SolitonWitness(n, k, q, L)
        if window >= cap:
            raise RuntimeError(f"det(L^{n} - u^{k}) = 0 but no kernel vector within window {cap}")
        window *= 2


def soliton_search(
    L: PolyMatrix, n_max: int, workers: int = 1, window: int = 4
) -> Optional[SolitonWitness]:
    """Smallest (n, k) with det(L^n - u^k) = 0, with a verified witness.

    ``window`` is the first kernel window tried; it doubles until a witness
    appears (one always exists within the adjugate degree bound).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if window < 1:
        raise ValueError("window must be >= 1")
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for n, p in powers(L, n_max):
            ks = cone_offsets(L, n)
            dets = (lambda k: determinant(minus_monomial(p, k)))
            values = pool.map(dets, ks) if pool else map(dets, ks)
            for k, det in zip(ks, values):
                if not det:
                    return _find_witness(L, n, k, p, window)
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return None


def brute_force_soliton_oracle(
    L: PolyMatrix,
    n_max: int,
    support_bound: int,
    max_unknowns: int = BRUTE_FORCE_MAX_UNKNOWNS,
) -> Optional[SolitonWitness]:
    """Search solitons supported in [-b, b]^d without determinants.

    Each window basis vector is pushed through L by repeated application;
    kernel vectors of L^n - u^k appear as dependencies found by inserting the
    image columns into an F2 xor basis.
    """
    size, dim = L.size, L.dim
    unknowns = _window_unknowns(size, dim, support_bound)
    if len(unknowns) > max_unknowns:
        raise ValueError(f"{len(unknowns)} unknowns exceed the cap of {max_unknowns}")
    units = [
        ModuleVector([LaurentPoly.monomial(e) if i == j else LaurentPoly.zero(dim) for i in range(size)])
        for j, e in unknowns
    ]
    images = list(units)
    for n in range(1, n_max + 1):
        images = [mat_apply(L, v) for v in images]
        for k in cone_offsets(L, n):
            found = []
            basis: dict[tuple, tuple[dict, int]] = {}  # lead key -> (vector, combination)
            for col, (img, unit) in enumerate(zip(images, units)):
                vec = _to_dict(img + unit.shift(k))
                comb = 1 << col
                while vec:
                    lead = max(vec)
                    if lead not in basis:
                        basis[lead] = (vec, comb)
                        break
                    bvec, bcomb = basis[lead]
                    vec = {key: 1 for key in vec.keys() ^ bvec.keys()}
                    comb ^= bcomb
                if not vec:
                    found.append(comb)
            if found:
                best = min(found, key=lambda m: (m.bit_count(), m))
                q = _normalise(_vector_from_mask(best, unknowns, size, dim))
                return SolitonWitness(n, k, q, L)
    return None


def _to_dict(v: ModuleVector) -> dict:
    return {(i, t): 1 for i, e in enumerate(v.entries) for t in e.terms}


# -- classification ---------------------------------------------------------------

@dataclass(frozen=True)
class ClassifierReport:
    verdict: str
    horizon: Optional[int]
    exact: bool
    witness: Optional[SolitonWitness] = None
    certificate: Optional[int] = None

    def __post_init__(self):
        if self.verdict == PERIODIC and self.certificate is None:
            raise ValueError("periodic verdict needs a certificate")
        if self.verdict == GLIDER and self.witness is None:
            raise ValueError("glider verdict needs a witness")

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "horizon": self.horizon,
            "exact": self.exact,
            "witness": self.witness.to_json() if self.witness else None,
            "certificate": {"n": self.certificate} if self.certificate is not None else None,
        }


def search_cost(L: PolyMatrix, n_max: int) -> int:
    """Number of determinants soliton_search may evaluate."""
    radius = L.max_abs_exponents()
    return sum(math.prod(2 * n * r + 1 for r in radius) for n in range(1, n_max + 1))


def classify(L: PolyMatrix, n_max: int, workers: int = 1) -> ClassifierReport:
    mix = mixing_test(L, n_max)
    if not mix.is_mixing:
        return ClassifierReport(PERIODIC, n_max, False, certificate=mix.period)
    w = soliton_search(L, n_max, workers=workers)
    if w is not None:
        return ClassifierReport(GLIDER, n_max, False, witness=w)
    return ClassifierReport(FRACTAL, n_max, False)


def classify_palindromic(t: LaurentPoly) -> ClassifierReport:
    """Exact classification of [[0, 1], [1, t]] for palindromic t in one variable."""
    if t.dim != 1:
        raise ValueError("palindromic classifier needs one variable")
    if not t.is_palindromic():
        raise ValueError(f"t = {format_poly(t)} is not palindromic")
    L = PolyMatrix.palindromic(t)
    if t.is_constant():
        # t = 0 gives L^1 = swap with a fixed vector, t = 1 gives L^3 = 1
        mix = mixing_test(L, 3)
        return ClassifierReport(PERIODIC, None, True, certificate=mix.period)
    exps = t.exponents_1d()
    if len(exps) == 2 and exps[0] == -exps[1]:
        m = exps[1]
        q = ModuleVector([LaurentPoly.one(), LaurentPoly.monomial(m)])
        return ClassifierReport(GLIDER, None, True, witness=SolitonWitness(1, (m,), q, L))
    return ClassifierReport(FRACTAL, None, True)


def b_sequence(t: LaurentPoly, n: int) -> list[LaurentPoly]:
    """b_0..b_n with b_0 = 0, b_1 = 1, b_{j+1} = t b_j + b_{j-1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b = [LaurentPoly.zero(t.dim), LaurentPoly.one(t.dim)]
    while len(b) <= n:
        b.append(t * b[-1] + b[-2])
    return b[: n + 1]
