"""Pauli monomials with explicit phases, and their dense matrices.

Letters are indexed 0..3 for I, X, Y, Z (index 0 is the unit).  A module
vector maps to a monomial by writing X^x Z^z at every site and cell qubit,
X before Z, so the bit pair (1, 1) becomes XZ = -iY.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .fpoly import LaurentPoly
from .symplectic import ModuleVector

I, X, Y, Z = 0, 1, 2, 3
LETTERS = "IXYZ"

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

DENSE_MAX_QUBITS = 14


def _structure_table():
    idx = np.zeros((4, 4), dtype=int)
    phase = np.zeros((4, 4), dtype=complex)
    for b in range(4):
        for c in range(4):
            prod = SIGMA[b] @ SIGMA[c]
            for a in range(4):
                ph = np.trace(SIGMA[a].conj().T @ prod) / 2
                if abs(ph) > 0.5:
                    idx[b, c] = a
                    phase[b, c] = np.round(ph.real) + 1j * np.round(ph.imag)
    return idx, phase


# e_b e_c = PRODUCT_PHASE[b, c] * e_{PRODUCT_INDEX[b, c]}
PRODUCT_INDEX, PRODUCT_PHASE = _structure_table()


def structure_constants() -> np.ndarray:
    """f[a, b, c] with e_b e_c = sum_a f[a, b, c] e_a."""
    f = np.zeros((4, 4, 4), dtype=complex)
    for b in range(4):
        for c in range(4):
            f[PRODUCT_INDEX[b, c], b, c] = PRODUCT_PHASE[b, c]
    return f


@dataclass(frozen=True)
class PauliMonomial:
    """phase * prod of letters; keys are (site, mu) with site an exponent tuple."""

    letters: tuple = ()
    phase: complex = 1

    def __post_init__(self):
        clean = tuple(sorted((tuple(k[0]), int(k[1]), int(a)) for k, a in _items(self.letters) if a))
        object.__setattr__(self, "letters", clean)
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def from_dict(cls, letters: dict, phase: complex = 1) -> "PauliMonomial":
        return cls(tuple(((site, mu), a) for (site, mu), a in letters.items()), phase)

    def as_dict(self) -> dict:
        return {(site, mu): a for site, mu, a in self.letters}

    def sites(self) -> list[tuple]:
        return sorted({site for site, _, _ in self.letters})

    def weight(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "PauliMonomial") -> "PauliMonomial":
        return pauli_mul(self, other)

    def __str__(self) -> str:
        if not self.letters:
            body = "I"
        else:
            parts = []
            for site, mu, a in self.letters:
                s = ",".join(map(str, site)) if len(site) > 1 else str(site[0])
                parts.append(f"{LETTERS[a]}{s}" + (f"@{mu}" if mu else ""))
            body = "*".join(parts)
        return f"({_phase_str(self.phase)}) {body}"


def _items(letters):
    for entry in letters:
        if len(entry) == 3:
            site, mu, a = entry
            yield (site, mu), a
        else:
            yield entry


def _phase_str(ph: complex) -> str:
    return {1: "+1", -1: "-1", 1j: "+i", -1j: "-i"}.get(ph, repr(ph))


def pauli_mul(p: PauliMonomial, q: PauliMonomial) -> PauliMonomial:
    letters = p.as_dict()
    phase = p.phase * q.phase
    for key, c in q.as_dict().items():
        b = letters.get(key, I)
        phase *= PRODUCT_PHASE[b, c]
        letters[key] = int(PRODUCT_INDEX[b, c])
    return PauliMonomial.from_dict(letters, phase)


def vec_to_pauli(q: ModuleVector) -> PauliMonomial:
    if q.size % 2:
        raise ValueError("module vector needs even length")
    n = q.size // 2
    letters: dict = {}
    phase = 1
    for mu in range(n):
        xs = set(q[mu].terms)
        zs = set(q[n + mu].terms)
        for site in xs | zs:
            x, z = site in xs, site in zs
            if x and z:
                letters[(site, mu)] = Y
                phase *= -1j
            else:
                letters[(site, mu)] = X if x else Z
    return PauliMonomial.from_dict(letters, phase)


def pauli_to_vec(p: PauliMonomial, qubits_per_cell: int = 1, dim: int = 1) -> ModuleVector:
    """Inverse of vec_to_pauli, ignoring the phase."""
    n = qubits_per_cell
    terms: list[list] = [[] for _ in range(2 * n)]
    for site, mu, a in p.letters:
        if len(site) != dim or not 0 <= mu < n:
            raise ValueError(f"site {site}@{mu} outside dim {dim} / {n} qubits per cell")
        if a in (X, Y):
            terms[mu].append(site)
        if a in (Z, Y):
            terms[n + mu].append(site)
    return ModuleVector([LaurentPoly(t, dim) for t in terms])


_PAULI_TOKEN = re.compile(r"([IXYZ])(-?\d+(?:,-?\d+)*)(?:@(\d+))?$")


def parse_pauli(text: str, qubits_per_cell: int = 1, dim: int = 1) -> PauliMonomial:
    """Parse e.g. 'X0', 'X0*Z2', 'Y3@1' (site, then optional cell qubit)."""
    letters: dict = {}
    phase = 1
    text = text.strip()
    if not text:
        raise ValueError("empty Pauli string")
    for part in text.split("*"):
        m = _PAULI_TOKEN.match(part.strip())
        if not m:
            raise ValueError(f"bad Pauli factor {part!r}")
        a = LETTERS.index(m.group(1))
        site = tuple(int(x) for x in m.group(2).split(","))
        mu = int(m.group(3) or 0)
        if len(site) != dim:
            raise ValueError(f"site {site} does not have {dim} coordinates")
        if mu >= qubits_per_cell:
            raise ValueError(f"cell qubit {mu} out of range for {qubits_per_cell} per cell")
        key = (site, mu)
        b = letters.get(key, I)
        phase *= PRODUCT_PHASE[b, a]
        letters[key] = int(PRODUCT_INDEX[b, a])
    return PauliMonomial.from_dict(letters, phase)


def dense_matrix(
    p: PauliMonomial,
    window: Sequence[int] | range,
    qubits_per_cell: int = 1,
) -> np.ndarray:
    """Kronecker product over the 1d site interval ``window`` (site-major, then mu)."""
    sites = list(window)
    nq = len(sites) * qubits_per_cell
    if nq > DENSE_MAX_QUBITS:
        raise ValueError(f"{nq} qubits exceed the dense cap of {DENSE_MAX_QUBITS}")
    letters = p.as_dict()
    inside = {(s, mu) for s in sites for mu in range(qubits_per_cell)}
    for (site, mu) in letters:
        if len(site) != 1 or (site[0], mu) not in inside:
            raise ValueError(f"letter at {site}@{mu} lies outside the window")
    mats = [SIGMA[letters.get(((s,), mu), I)] for s in sites for mu in range(qubits_per_cell)]
    if not mats:
        return np.array([[p.phase]], dtype=complex)
    return p.phase * reduce(np.kron, mats)


def letter_word(q: ModuleVector) -> tuple[int, list[int]]:
    """(first site, letters) of the one-qubit-per-cell monomial of q, phase dropped."""
    if q.size != 2 or q.dim != 1:
        raise ValueError("letter words need one qubit per cell and one dimension")
    p = vec_to_pauli(q)
    if not p.letters:
        return 0, []
    d = {site[0]: a for site, _, a in p.letters}
    lo, hi = min(d), max(d)
    return lo, [d.get(j, I) for j in range(lo, hi + 1)]
