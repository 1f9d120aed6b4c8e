"""Expectation values of Pauli words in short-range entangled states.

The state is omega_0 o beta with omega_0 a translation-invariant product
state of qubits and beta = prod_j Ad(U_{j,j+R}), U = exp(i g X_j X_{j+R}).
Sites are grouped into supersites of R qubits so that beta has range one on
supersites; a word of K supersite letters is then evaluated as a weighted
automaton on the bond space A (x) A in K matrix-vector products.

Convention: beta(a) = U a U^dagger.  Only absolute values are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .pauli import DENSE_MAX_QUBITS, PRODUCT_INDEX, PRODUCT_PHASE, SIGMA, I, letter_word
from .symplectic import ModuleVector, PolyMatrix, mat_apply

MAX_RANGE = 2
COMMUTE_TOL = 1e-12


# -- states ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProductStateParams:
    """One-site density matrix with eigenvalue 1 - p on the Bloch direction (theta, phi).

    Angles are in degrees.
    """

    p: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"p = {self.p} outside [0, 0.5]")

    @classmethod
    def parse(cls, text: str) -> "ProductStateParams":
        """'p=0.1,theta=30,phi=45'."""
        kw = _parse_kv(text)
        unknown = set(kw) - {"p", "theta", "phi"}
        if unknown or "p" not in kw:
            raise ValueError(f"bad state spec {text!r}")
        return cls(**{k: float(v) for k, v in kw.items()})

    def density_matrix(self) -> np.ndarray:
        m = moments_from_bloch(self)
        return 0.5 * (SIGMA[0] + m[1] * SIGMA[1] + m[2] * SIGMA[2] + m[3] * SIGMA[3])


def _parse_kv(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def moments_from_bloch(s: ProductStateParams) -> np.ndarray:
    """(omega_I, omega_X, omega_Y, omega_Z)."""
    th, ph = math.radians(s.theta), math.radians(s.phi)
    r = 1.0 - 2.0 * s.p
    return np.array(
        [1.0, r * math.sin(th) * math.cos(ph), r * math.sin(th) * math.sin(ph), r * math.cos(th)]
    )


def lambda_of_state(m: Sequence[float]) -> float:
    """sup |omega(P)| over nontrivial Pauli monomials of a uniform one-qubit product state."""
    return float(max(abs(m[1]), abs(m[2]), abs(m[3])))


def ball_volume(R: int, d: int) -> int:
    """Lattice points within sup-distance R of a site."""
    return (2 * R + 1) ** d


def c_beta(N: int, R: int, d: int) -> int:
    if N < 1 or R < 1 or d < 1:
        raise ValueError("N, R and d must be >= 1")
    return 2 ** (N * ball_volume(R, d) ** 2)


def thermalization_certificate(m: Sequence[float], N: int, R: int, d: int) -> bool:
    """lambda * C_beta < 1."""
    return lambda_of_state(m) * c_beta(N, R, d) < 1


@dataclass(frozen=True)
class CertificateReport:
    lam: float
    c_beta: int
    certified: bool
    stabilizer: bool

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "c_beta": self.c_beta,
            "product": self.lam * self.c_beta,
            "certified": self.certified,
            "p_generic": self.lam < 1,
            "stabilizer_state": self.stabilizer,
        }


def certify(s: ProductStateParams, N: int = 1, R: int = 1, d: int = 1) -> CertificateReport:
    m = moments_from_bloch(s)
    lam = lambda_of_state(m)
    return CertificateReport(lam, c_beta(N, R, d), thermalization_certificate(m, N, R, d),
                             math.isclose(lam, 1.0, abs_tol=1e-12))


# -- beta --------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaSpec:
    """Product of exp(i g X_j X_{j+R}) over all j."""

    g: float
    R: int = 1
    kind: str = "xx"

    def __post_init__(self):
        if self.kind != "xx":
            raise ValueError(f"unknown beta kind {self.kind!r}")
        if self.R < 1:
            raise ValueError("range must be >= 1")
        if self.R > MAX_RANGE:
            raise ValueError(f"range {self.R} exceeds {MAX_RANGE}: bond dimension 16^R is too large")
        object.__setattr__(self, "g", float(self.g) % (2 * math.pi))

    @classmethod
    def parse(cls, text: str) -> "BetaSpec":
        """'xx:g=0.7,R=1'."""
        kind, _, rest = text.partition(":")
        kw = _parse_kv(rest)
        if set(kw) - {"g", "R"}:
            raise ValueError(f"bad beta spec {text!r}")
        return cls(float(kw.get("g", 0.0)), int(kw.get("R", 1)), kind.strip().lower())

    def gate(self) -> np.ndarray:
        """exp(i g X (x) X) on qubits (j, j + R), as a 4x4 matrix."""
        xx = np.kron(SIGMA[1], SIGMA[1])
        return math.cos(self.g) * np.eye(4) + 1j * math.sin(self.g) * xx


def _apply_left(t: np.ndarray, g: np.ndarray, a: int, b: int, nq: int) -> np.ndarray:
    """g @ t with g on qubits (a, b); t has row axes 0..nq-1 and column axes nq..2nq-1."""
    out = np.tensordot(g.reshape(2, 2, 2, 2), t, axes=([2, 3], [a, b]))
    return np.moveaxis(out, [0, 1], [a, b])


def _apply_right(t: np.ndarray, g: np.ndarray, a: int, b: int, nq: int) -> np.ndarray:
    """t @ g with g on qubits (a, b)."""
    out = np.tensordot(t, g.reshape(2, 2, 2, 2), axes=([nq + a, nq + b], [0, 1]))
    return np.moveaxis(out, [-2, -1], [nq + a, nq + b])


def _conjugate(op: np.ndarray, b: BetaSpec, sites: Sequence[int], lefts: Sequence[int]) -> np.ndarray:
    """U op U^dagger with U the product of U_{j, j+R} for j in ``lefts``."""
    pos = {s: i for i, s in enumerate(sites)}
    nq = len(sites)
    g = b.gate()
    gd = g.conj().T
    t = op.reshape((2,) * (2 * nq))
    for j in lefts:
        t = _apply_left(t, g, pos[j], pos[j + b.R], nq)
        t = _apply_right(t, gd, pos[j], pos[j + b.R], nq)
    return t.reshape(2 ** nq, 2 ** nq)


def _gate_product(b: BetaSpec, sites: Sequence[int], lefts: Sequence[int]) -> np.ndarray:
    """Product of the gates U_{j, j+R} for j in ``lefts`` on the register ``sites``."""
    pos = {s: i for i, s in enumerate(sites)}
    nq = len(sites)
    t = np.eye(2 ** nq, dtype=complex).reshape((2,) * (2 * nq))
    for j in lefts:
        t = _apply_left(t, b.gate(), pos[j], pos[j + b.R], nq)
    return t.reshape(2 ** nq, 2 ** nq)


def check_translates_commute(b: BetaSpec) -> float:
    """Largest commutator norm of U_{0,R} with its overlapping translates."""
    sites = list(range(-b.R, 2 * b.R + 1))
    u0 = _gate_product(b, sites, [0])
    worst = 0.0
    for j in range(-b.R, b.R + 1):
        if j == 0:
            continue
        uj = _gate_product(b, sites, [j])
        worst = max(worst, float(np.abs(u0 @ uj - uj @ u0).max()))
    return worst


def pauli_coefficients(m: np.ndarray, nq: int) -> np.ndarray:
    """c[l_1, ..., l_nq] = tr(P_l m) / 2^nq, qubit 0 first."""
    letters = [chr(c) for c in range(ord("A"), ord("Z") + 1)] + [chr(c) for c in range(ord("a"), ord("z") + 1)]
    out_ix, row_ix, col_ix = letters[:nq], letters[nq: 2 * nq], letters[2 * nq: 3 * nq]
    terms = [f"{o}{c}{r}" for o, c, r in zip(out_ix, col_ix, row_ix)]
    spec = ",".join(terms + ["".join(row_ix + col_ix)]) + "->" + "".join(out_ix)
    t = m.reshape((2,) * (2 * nq))
    return np.einsum(spec, *([SIGMA] * nq), t, optimize="greedy") / 2 ** nq


def _supersite_tables(ns: int):
    """Letter products for the 4^ns-letter alphabet of ns-qubit supersites."""
    idx = np.zeros((1, 1), dtype=int)
    ph = np.ones((1, 1), dtype=complex)
    for _ in range(ns):
        a = idx.shape[0]
        idx = (idx[:, None, :, None] * 4 + PRODUCT_INDEX[None, :, None, :]).reshape(4 * a, 4 * a)
        ph = (ph[:, None, :, None] * PRODUCT_PHASE[None, :, None, :]).reshape(4 * a, 4 * a)
    return idx, ph


def supersite_moments(m: Sequence[float], ns: int) -> np.ndarray:
    return reduce(np.kron, [np.asarray(m, dtype=float)] * ns)


def beta_coefficients(b: BetaSpec) -> np.ndarray:
    """beta[a, b, c, d]: coefficient of e_b (x) e_c (x) e_d in beta(e_a) on three supersites."""
    if check_translates_commute(b) > COMMUTE_TOL:
        raise ValueError("gate does not commute with its translates")
    ns = b.R
    nq = 3 * ns
    if nq > DENSE_MAX_QUBITS:
        raise ValueError(f"{nq} qubits exceed the dense cap")
    sites = list(range(-ns, 2 * ns))
    A = 4 ** ns
    out = np.zeros((A, A, A, A), dtype=complex)
    for a in range(A):
        letters = [(a // 4 ** (ns - 1 - i)) % 4 for i in range(ns)]
        mid = reduce(np.kron, [SIGMA[x] for x in letters])
        op = np.kron(np.kron(np.eye(2 ** ns), mid), np.eye(2 ** ns))
        out[a] = pauli_coefficients(_conjugate(op, b, sites, range(-b.R, ns)), nq).reshape(A, A, A)
    return out


# -- automaton -----------------------------------------------------------------------

@dataclass(frozen=True)
class AutomatonData:
    """Transition maps M[a] on the bond space A (x) A, start e_1 (x) e_1, final gamma."""

    transitions: np.ndarray  # (A, A*A, A*A)
    start: np.ndarray
    final: np.ndarray
    qubits_per_letter: int

    @property
    def alphabet(self) -> int:
        return self.transitions.shape[0]


def build_automaton(m: Sequence[float], beta: np.ndarray) -> AutomatonData:
    """M^{kl}_{a,ij} = sum_{b,c,d} omega_d f^d_{ib} f^k_{jc} beta^{bcl}_a."""
    A = beta.shape[0]
    ns = round(math.log(A, 4))
    if 4 ** ns != A or beta.shape != (A, A, A, A):
        raise ValueError(f"beta tensor has shape {beta.shape}")
    idx, ph = _supersite_tables(ns)
    om = supersite_moments(m, ns)
    # w[i, b] = omega(e_i e_b)
    w = ph * om[idx]
    # f[k, j, c] = f^k_{jc}
    f = np.zeros((A, A, A), dtype=complex)
    jj, cc = np.meshgrid(np.arange(A), np.arange(A), indexing="ij")
    f[idx, jj, cc] = ph
    g = np.einsum("ib,abcl->aicl", w, beta)
    mt = np.einsum("kjc,aicl->aklij", f, g).reshape(A, A * A, A * A)
    start = np.zeros(A * A, dtype=complex)
    start[0] = 1.0
    final = np.outer(om, om).reshape(A * A).astype(complex)
    return AutomatonData(mt, start, final, ns)


def group_word(word: Sequence[int], ns: int) -> list[int]:
    """Pack one-qubit letters into supersite letters, padding with identities."""
    word = list(word)
    word += [I] * (-len(word) % ns)
    out = []
    for s in range(0, len(word), ns):
        a = 0
        for x in word[s: s + ns]:
            a = 4 * a + x
        out.append(a)
    return out


def evaluate(aut: AutomatonData, word: Sequence[int]) -> complex:
    """gamma M_{a_K} ... M_{a_1} (e_1 (x) e_1) for one-qubit letters ``word``."""
    v = aut.start
    mt = aut.transitions
    for a in group_word(word, aut.qubits_per_letter):
        v = mt[a] @ v
    return complex(aut.final @ v)


def dense_oracle(word: Sequence[int], s: ProductStateParams, b: BetaSpec) -> complex:
    """tr(rho U P U^dagger) on the word's sites padded by R on each side."""
    K = len(word)
    R = b.R
    nq = K + 2 * R
    if nq > DENSE_MAX_QUBITS:
        raise ValueError(f"{nq} qubits exceed the dense cap of {DENSE_MAX_QUBITS}")
    sites = list(range(-R, K + R))
    p = reduce(np.kron, [SIGMA[I]] * R + [SIGMA[a] for a in word] + [SIGMA[I]] * R)
    t = _conjugate(p, b, sites, range(-R, K)).reshape((2,) * (2 * nq))
    rho = s.density_matrix()
    # tr((rho (x) ... (x) rho) t), one qubit at a time
    for _ in range(nq):
        t = np.tensordot(rho, t, axes=([1, 0], [0, t.ndim // 2]))
    return complex(t)


# -- evolved observables ---------------------------------------------------------------

class Evaluator:
    """Caches the automaton for one (state, beta) pair."""

    def __init__(self, s: ProductStateParams, b: BetaSpec):
        self.state = s
        self.beta = b
        self.automaton = build_automaton(moments_from_bloch(s), beta_coefficients(b))

    def abs_expectation(self, q: ModuleVector) -> float:
        _, word = letter_word(q)
        return abs(evaluate(self.automaton, word))


def _check_chain(L: PolyMatrix, q0: ModuleVector) -> None:
    if L.size != 2 or L.dim != 1:
        raise ValueError("expectation values need a 1d QCA with one qubit per cell")
    if not q0:
        raise ValueError("initial vector must be nonzero")


def expect_evolved(
    L: PolyMatrix, q0: ModuleVector, n: int, s: ProductStateParams, b: BetaSpec
) -> float:
    """|omega_0 o beta (P_{L^n q0})|."""
    _check_chain(L, q0)
    if n < 0:
        raise ValueError("n must be >= 0")
    q = q0
    for _ in range(n):
        q = mat_apply(L, q)
    return Evaluator(s, b).abs_expectation(q)


def expect_series(
    L: PolyMatrix,
    q0: ModuleVector,
    steps: int,
    s: ProductStateParams,
    b: BetaSpec,
) -> list[tuple[int, int, float]]:
    """(n, first site of the word, |expectation|) for n = 0..steps."""
    _check_chain(L, q0)
    ev = Evaluator(s, b)
    out = []
    q = q0
    for n in range(steps + 1):
        if n:
            q = mat_apply(L, q)
        start, word = letter_word(q)
        out.append((n, start, abs(evaluate(ev.automaton, word))))
    return out
