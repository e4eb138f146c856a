"""Shared test helpers."""

import numpy as np
import scipy.linalg


def one_kick_unitary(n: int, tau: float, g: float, eps: float, mode: str) -> np.ndarray:
    """Explicit N^2 x N^2 one-kick unitary of the coupled pair.

    Independent of the package's propagator construction: the single-chain
    propagator comes from diagonalizing the hopping matrix H = (V + V^T)/2
    and exponentiating, and the kick acts as an explicit diagonal matrix on
    the row-major flattened amplitude grid.
    """
    v = np.roll(np.eye(n), -1, axis=0)
    h = 0.5 * (v + v.T)
    gh = scipy.linalg.expm(1j * (tau / (2.0 * np.pi)) * h)
    u_free = np.kron(gh, gh)
    c = np.cos(2.0 * np.pi * np.arange(1, n + 1) / n)
    if mode == "global":
        phase = np.exp(1j * (g * c[:, None] + g * c[None, :] - 2.0 * eps * np.outer(c, c)))
    elif mode == "local":
        off = 1.0 - np.eye(n)
        phase = np.exp(1j * (g + eps * off) * (c[:, None] + c[None, :]))
    else:
        raise ValueError(mode)
    return np.diag(phase.reshape(-1)) @ u_free


def random_state(n: int, seed: int) -> np.ndarray:
    """Normalized random complex amplitude grid."""
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return psi / np.linalg.norm(psi)
