"""Observables of the joint one-magnon-each state.

Energies, reduced density matrices, entanglement entropies, the inter-chain
concurrence, and single-qubit mutual information between a site of chain A
and a site of chain B.

Entropy conventions: von Neumann and linear entropies use natural
logarithms (nats), so the maximal one-magnon entanglement entropy at
N = 100 is ln 100 = 4.6052.  The cross-qubit mutual information map is
reported in bits by default (``base=2``); pass base=np.e for nats.  In the
fixed one-down-spin sector the two-qubit reduced density matrix of sites
(jA, jB) is diagonal in the occupation basis (tracing out the other sites
kills every occupied/unoccupied coherence), so the pair mutual information
reduces to a Shannon mutual information of the four occupation outcomes.
"""

from typing import NamedTuple

import numpy as np

__all__ = [
    "QubitPairDistribution",
    "hopping_energy",
    "coupling_energy",
    "reduced_density",
    "von_neumann_entropy",
    "schmidt_entropy",
    "linear_entropy",
    "concurrence_between_systems",
    "qubit_pair_distribution",
    "pair_mutual_information",
    "mutual_information_map",
]

_EIG_FLOOR = 1e-14
_IMAG_TOL = 1e-12


class QubitPairDistribution(NamedTuple):
    """Occupation probabilities of the (site jA of A, site jB of B) qubit
    pair: p11 both down, p10 only A down, p01 only B down, p00 neither."""

    p11: float
    p10: float
    p01: float
    p00: float


def _site_cosines(n: int) -> np.ndarray:
    return np.cos(2.0 * np.pi * np.arange(1, n + 1) / n)


def hopping_energy(psi: np.ndarray, which: str = "A") -> float:
    """Hopping (kinetic) energy of one chain:
    E = (1/2) sum psi*(x,y) [psi(x+1,y) + psi(x-1,y)], sites mod N.

    The imaginary residue is asserted below 1e-12 and discarded.
    """
    if which == "B":
        psi = psi.T
    elif which != "A":
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    val = 0.5 * np.vdot(psi, np.roll(psi, -1, axis=0) + np.roll(psi, 1, axis=0))
    if abs(val.imag) >= _IMAG_TOL:
        raise FloatingPointError(f"hopping energy imaginary residue {val.imag:.3e}")
    return float(val.real)


def coupling_energy(psi: np.ndarray, eps: float, mode: str = "global") -> float:
    """Interaction energy of the coupled pair.

    global: 2 eps sum |psi(x,y)|^2 c(x) c(y)
    local:  eps N / 4 - eps sum |psi(x,y)|^2 [c(x) + c(y)] (1 - delta_xy)
    """
    n = psi.shape[0]
    c = _site_cosines(n)
    w = np.abs(psi) ** 2
    if mode == "global":
        return 2.0 * eps * float(np.einsum("xy,x,y->", w, c, c))
    if mode == "local":
        off = 1.0 - np.eye(n)
        return eps * n / 4.0 - eps * float(np.sum(w * (c[:, None] + c[None, :]) * off))
    raise ValueError(f"mode must be 'global' or 'local', got {mode!r}")


def reduced_density(psi: np.ndarray, which: str = "A") -> np.ndarray:
    """Reduced density matrix of one chain from the pure joint state.

    rho_A[x, x'] = sum_y psi(x, y) psi*(x', y); rho_B by the transposed
    pairing.  Hermitian, PSD, unit trace up to rounding.
    """
    if which == "A":
        return psi @ psi.conj().T
    if which == "B":
        return psi.T @ psi.conj()
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S = -Tr rho ln rho in nats; eigenvalues below 1e-14 contribute 0."""
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > _EIG_FLOOR]
    s = float(-np.sum(lam * np.log(lam)))
    upper = float(np.log(rho.shape[0]))
    if not (-1e-10 <= s <= upper + 1e-10):
        raise FloatingPointError(f"entropy {s!r} outside [0, ln {rho.shape[0]}]")
    return min(max(s, 0.0), upper)


def schmidt_entropy(psi: np.ndarray) -> float:
    """Entanglement entropy straight from the Schmidt spectrum of psi.

    Identical to von_neumann_entropy(reduced_density(psi)) since the squared
    singular values of psi are the eigenvalues of either reduced density
    matrix; kept as the fast path for per-kick recording.
    """
    sv = np.linalg.svd(psi, compute_uv=False)
    lam = sv ** 2
    lam = lam[lam > _EIG_FLOOR]
    return float(-np.sum(lam * np.log(lam)))


def _purity(rho: np.ndarray) -> float:
    return float(np.einsum("ij,ji->", rho, rho).real)


def linear_entropy(rho: np.ndarray) -> float:
    """T = 1 - Tr rho^2."""
    return 1.0 - _purity(rho)


def concurrence_between_systems(rho_a: np.ndarray) -> float:
    """Generalized concurrence C = sqrt(2 (1 - Tr rho_A^2)).

    Uses the same Tr rho^2 evaluation as linear_entropy, so C^2 = 2 T holds
    to rounding.
    """
    return float(np.sqrt(max(2.0 * linear_entropy(rho_a), 0.0)))


def qubit_pair_distribution(psi: np.ndarray, jA: int, jB: int) -> QubitPairDistribution:
    """Occupation distribution of the qubit pair (site jA of A, jB of B).

    In the one-down-spin-per-chain sector: p11 = |psi(jA, jB)|^2,
    p10 = sum_{y != jB} |psi(jA, y)|^2, p01 = sum_{x != jA} |psi(x, jB)|^2,
    p00 the remainder.  Tiny negative remainders from rounding clip to 0.
    """
    n = psi.shape[0]
    jA, jB = int(jA), int(jB)
    if not (1 <= jA <= n):
        raise ValueError(f"jA must be in 1..{n}, got {jA}")
    if not (1 <= jB <= n):
        raise ValueError(f"jB must be in 1..{n}, got {jB}")
    w = np.abs(psi) ** 2
    p11 = float(w[jA - 1, jB - 1])
    p10 = max(float(w[jA - 1, :].sum()) - p11, 0.0)
    p01 = max(float(w[:, jB - 1].sum()) - p11, 0.0)
    p00 = max(1.0 - p11 - p10 - p01, 0.0)
    return QubitPairDistribution(p11=p11, p10=p10, p01=p01, p00=p00)


def pair_mutual_information(dist: QubitPairDistribution, base: float = 2.0) -> float:
    """Mutual information of a single qubit pair from its occupation
    distribution: I = sum p log[p / (qa qb)] over the four outcomes."""
    if base <= 1.0:
        raise ValueError(f"log base must be > 1, got {base}")
    qa1 = dist.p11 + dist.p10
    qb1 = dist.p11 + dist.p01
    qa0 = 1.0 - qa1
    qb0 = 1.0 - qb1
    total = 0.0
    for p, qa, qb in ((dist.p11, qa1, qb1), (dist.p10, qa1, qb0),
                      (dist.p01, qa0, qb1), (dist.p00, qa0, qb0)):
        if p > 0.0:
            total += p * np.log(p / (qa * qb))
    return max(total, 0.0) / float(np.log(base))


def mutual_information_map(psi: np.ndarray, base: float = 2.0) -> np.ndarray:
    """Mutual information between every qubit of A and every qubit of B.

    Returns an N x N grid indexed [jA - 1, jB - 1], entries >= 0.  Evaluated
    in one vectorized pass: the pair distributions of all (jA, jB) follow
    from |psi|^2 and its marginals.
    """
    if base <= 1.0:
        raise ValueError(f"log base must be > 1, got {base}")
    w = np.abs(psi) ** 2
    pa = w.sum(axis=1)[:, None]
    pb = w.sum(axis=0)[None, :]
    p11 = w
    p10 = np.clip(pa - p11, 0.0, 1.0)
    p01 = np.clip(pb - p11, 0.0, 1.0)
    p00 = np.clip(1.0 - p11 - p10 - p01, 0.0, 1.0)
    qa1, qa0 = pa, 1.0 - pa
    qb1, qb0 = pb, 1.0 - pb

    def term(p, qa, qb):
        with np.errstate(divide="ignore", invalid="ignore"):
            t = p * np.log(p / (qa * qb))
        return np.where(p > 0, t, 0.0)

    nats = (term(p11, qa1, qb1) + term(p10, qa1, qb0)
            + term(p01, qa0, qb1) + term(p00, qa0, qb0))
    return np.clip(nats, 0.0, None) / float(np.log(base))
