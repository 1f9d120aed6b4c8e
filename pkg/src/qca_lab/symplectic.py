"""Matrices over the Laurent ring, the form Omega and pseudo-unitarity.

Vectors of length 2N hold X-parts in entries 0..N-1 and Z-parts in entries
N..2N-1.  Signs never appear: the ring has characteristic 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .fpoly import DimensionMismatch, LaurentPoly, format_poly, parse_poly


class SizeMismatch(ValueError):
    pass


class NotInvertible(ValueError):
    pass


def _coerce_entries(entries, dim: int | None):
    out = []
    for e in entries:
        if isinstance(e, str):
            e = parse_poly(e, dim or 1)
        elif isinstance(e, int):
            if e not in (0, 1):
                raise ValueError("integer entries must be 0 or 1")
            e = LaurentPoly.one(dim or 1) if e else LaurentPoly.zero(dim or 1)
        out.append(e)
    return out


@dataclass(frozen=True)
class ModuleVector:
    entries: tuple

    def __init__(self, entries: Iterable, dim: int | None = None):
        entries = tuple(_coerce_entries(entries, dim))
        if not entries:
            raise SizeMismatch("empty vector")
        d = entries[0].dim
        if any(e.dim != d for e in entries):
            raise DimensionMismatch("entries have different variable counts")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zero(cls, size: int, dim: int = 1) -> "ModuleVector":
        return cls([LaurentPoly.zero(dim)] * size)

    @classmethod
    def unit(cls, size: int, i: int, dim: int = 1) -> "ModuleVector":
        z = LaurentPoly.zero(dim)
        return cls([LaurentPoly.one(dim) if j == i else z for j in range(size)])

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return self.entries[0].dim

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __bool__(self) -> bool:
        return any(self.entries)

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if self.size != other.size:
            raise SizeMismatch(f"sizes {self.size} and {other.size}")
        return ModuleVector(a + b for a, b in zip(self, other))

    def scale(self, r: LaurentPoly) -> "ModuleVector":
        return ModuleVector(r * e for e in self)

    def shift(self, k) -> "ModuleVector":
        return ModuleVector(e.shift(k) for e in self)

    def involute(self) -> "ModuleVector":
        return ModuleVector(e.involute() for e in self)

    def total_weight(self) -> int:
        return sum(e.weight() for e in self)

    def to_strings(self) -> list[str]:
        return [format_poly(e) for e in self]

    def __repr__(self) -> str:
        return f"ModuleVector({self.to_strings()})"


@dataclass(frozen=True)
class PolyMatrix:
    rows: tuple

    def __init__(self, rows: Iterable[Iterable], dim: int | None = None):
        rows = tuple(tuple(_coerce_entries(r, dim)) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise SizeMismatch("matrix must be square and non-empty")
        d = rows[0][0].dim
        if any(e.dim != d for r in rows for e in r):
            raise DimensionMismatch("entries have different variable counts")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, size: int, dim: int = 1) -> "PolyMatrix":
        one, zero = LaurentPoly.one(dim), LaurentPoly.zero(dim)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)])

    @classmethod
    def scalar(cls, r: LaurentPoly, size: int) -> "PolyMatrix":
        zero = LaurentPoly.zero(r.dim)
        return cls([[r if i == j else zero for j in range(size)] for i in range(size)])

    @classmethod
    def palindromic(cls, t: LaurentPoly) -> "PolyMatrix":
        """[[0, 1], [1, t]]."""
        return cls([[LaurentPoly.zero(t.dim), LaurentPoly.one(t.dim)],
                    [LaurentPoly.one(t.dim), t]])

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return self.rows[0][0].dim

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> ModuleVector:
        return ModuleVector(r[j] for r in self.rows)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        _same_size(self, other)
        return PolyMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    __sub__ = __add__

    def __matmul__(self, other):
        if isinstance(other, ModuleVector):
            return mat_apply(self, other)
        return mat_mul(self, other)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(zip(*self.rows))

    def involute(self) -> "PolyMatrix":
        return PolyMatrix([[e.involute() for e in r] for r in self.rows])

    def involute_transpose(self) -> "PolyMatrix":
        return self.involute().transpose()

    def scale(self, r: LaurentPoly) -> "PolyMatrix":
        return PolyMatrix([[r * e for e in row] for row in self.rows])

    def max_abs_exponents(self) -> tuple[int, ...]:
        """Per-variable max |exponent| over all entries (the propagation radius)."""
        out = [0] * self.dim
        for row in self.rows:
            for e in row:
                if e:
                    for i, (lo, hi) in enumerate(e.deg_extremes()):
                        out[i] = max(out[i], abs(lo), abs(hi))
        return tuple(out)

    def to_strings(self) -> list[list[str]]:
        return [[format_poly(e) for e in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.to_strings()})"


def _same_size(a, b) -> None:
    if a.size != b.size:
        raise SizeMismatch(f"sizes {a.size} and {b.size}")


def mat_apply(m: PolyMatrix, q: ModuleVector) -> ModuleVector:
    _same_size(m, q)
    out = []
    for row in m.rows:
        acc = LaurentPoly.zero(m.dim)
        for a, x in zip(row, q.entries):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return ModuleVector(out)


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    _same_size(a, b)
    n = a.size
    cols = [[b.rows[k][j] for k in range(n)] for j in range(n)]
    out = []
    for row in a.rows:
        new = []
        for col in cols:
            acc = LaurentPoly.zero(a.dim)
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return PolyMatrix(out)


def mat_pow(a: PolyMatrix, n: int) -> PolyMatrix:
    """a**n by binary powering."""
    if n < 0:
        raise ValueError("negative power")
    result = PolyMatrix.identity(a.size, a.dim)
    base = a
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def mat_pow_iter(a: PolyMatrix, n: int) -> PolyMatrix:
    """a**n by n - 1 successive products."""
    if n < 0:
        raise ValueError("negative power")
    result = PolyMatrix.identity(a.size, a.dim)
    for _ in range(n):
        result = mat_mul(result, a)
    return result


def powers(a: PolyMatrix, n_max: int):
    """Yield (n, a**n) for n = 1..n_max."""
    p = a
    for n in range(1, n_max + 1):
        if n > 1:
            p = mat_mul(p, a)
        yield n, p


def determinant(m: PolyMatrix) -> LaurentPoly:
    """Laplace expansion, memoised over the set of used columns.

    Rows are expanded sparsest first so zero entries prune early.
    """
    n = m.size
    zero = LaurentPoly.zero(m.dim)
    order = sorted(range(n), key=lambda i: sum(e.weight() for e in m.rows[i]))
    rows = [m.rows[i] for i in order]

    @lru_cache(maxsize=None)
    def minor(depth: int, used: int) -> LaurentPoly:
        if depth == n:
            return LaurentPoly.one(m.dim)
        acc = zero
        for j, e in enumerate(rows[depth]):
            if e and not (used >> j) & 1:
                sub = minor(depth + 1, used | (1 << j))
                if sub:
                    acc = acc + e * sub
        return acc

    return minor(0, 0)


def submatrix(m: PolyMatrix, drop_row: int, drop_col: int) -> PolyMatrix:
    return PolyMatrix(
        [[e for j, e in enumerate(r) if j != drop_col] for i, r in enumerate(m.rows) if i != drop_row]
    )


def adjugate(m: PolyMatrix) -> PolyMatrix:
    n = m.size
    if n == 1:
        return PolyMatrix.identity(1, m.dim)
    return PolyMatrix([[determinant(submatrix(m, j, i)) for j in range(n)] for i in range(n)])


def mat_inverse_unit(m: PolyMatrix) -> PolyMatrix:
    """Inverse of a matrix whose determinant is a monomial u^k."""
    det = determinant(m)
    if not det.is_monomial():
        raise NotInvertible(f"determinant {format_poly(det)} is not a unit")
    (k,) = det.terms
    return adjugate(m).scale(LaurentPoly.monomial(tuple(-x for x in k)))


def omega_matrix(size: int, dim: int = 1) -> PolyMatrix:
    if size % 2:
        raise SizeMismatch("symplectic form needs even size")
    n = size // 2
    one, zero = LaurentPoly.one(dim), LaurentPoly.zero(dim)
    return PolyMatrix([[one if abs(i - j) == n else zero for j in range(size)] for i in range(size)])


def omega_form(q: ModuleVector, qp: ModuleVector) -> LaurentPoly:
    """Omega(q, q') = sum_ab omega^ab conj(q_a) q'_b."""
    _same_size(q, qp)
    if q.size % 2:
        raise SizeMismatch("symplectic form needs even size")
    n = q.size // 2
    acc = LaurentPoly.zero(q.dim)
    for i in range(n):
        acc = acc + q[i].involute() * qp[n + i] + q[n + i].involute() * qp[i]
    return acc


def is_pseudo_unitary(m: PolyMatrix) -> bool:
    if m.size % 2:
        return False
    w = omega_matrix(m.size, m.dim)
    return mat_mul(mat_mul(m.involute_transpose(), w), m) == w


def minus_monomial(m: PolyMatrix, k: Sequence[int]) -> PolyMatrix:
    """m - u^k * 1."""
    return m + PolyMatrix.scalar(LaurentPoly.monomial(k), m.size)


def block_diag(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.dim != b.dim:
        raise DimensionMismatch("blocks over different rings")
    zero = LaurentPoly.zero(a.dim)
    rows = [list(r) + [zero] * b.size for r in a.rows]
    rows += [[zero] * a.size + list(r) for r in b.rows]
    return PolyMatrix(rows)


def double(a: PolyMatrix) -> PolyMatrix:
    """blockdiag(A(u), (A(1/u)^T)^-1), pseudo-unitary for any invertible A."""
    return block_diag(a, mat_inverse_unit(a.involute_transpose()))


# -- serialization ------------------------------------------------------------

def matrix_to_config(m: PolyMatrix) -> dict:
    return {"dims": m.dim, "qubits_per_cell": m.size // 2, "matrix": m.to_strings()}


def matrix_from_config(cfg: dict) -> PolyMatrix:
    d = int(cfg.get("dims", 1))
    if "t" in cfg:
        return PolyMatrix.palindromic(parse_poly(str(cfg["t"]), d))
    if "matrix" not in cfg:
        raise ValueError("config needs 'matrix' or 't'")
    rows = cfg["matrix"]
    m = PolyMatrix([[parse_poly(str(e), d) for e in r] for r in rows])
    if "qubits_per_cell" in cfg and m.size != 2 * int(cfg["qubits_per_cell"]):
        raise SizeMismatch(f"matrix size {m.size} != 2 * qubits_per_cell")
    return m
