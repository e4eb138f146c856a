"""Coupled one-magnon-each evolution of two kicked-Harper chains.

The joint state of chains A and B, each carrying exactly one down spin on
N sites, is the N x N complex amplitude grid psi(x, y) with x the down-spin
site of A and y that of B (1-based sites).  One driving period is free XY
propagation of both chains for t = tau / 2 pi followed by a diagonal kick:

    psi' = phases * (G @ psi @ G.T)

with G the single-chain propagator and ``phases`` the per-(x, y) kick
phase grid.  Two coupling modes are supported, with c(j) = cos(2 pi j / N):

* global: phase exp{i [g c(x) + g c(y) - 2 eps c(x) c(y)]} (every site of A
  coupled to every site of B through the cos-cos product).
* local:  phase exp{i (g + eps (1 - delta_xy)) [c(x) + c(y)]} (the coupling
  modifies the potential strength except when both down spins sit on the
  same site index).
"""

from typing import Callable, NamedTuple, Optional

import numpy as np

from .propagator import bessel_propagator, ring_propagator

__all__ = [
    "QuantumParams",
    "NormDriftError",
    "initial_delta_state",
    "kick_phase_grid",
    "build_propagator",
    "evolve_one_kick",
    "evolve",
]


class QuantumParams(NamedTuple):
    """Joint-evolution parameters: chain length n, kick interval tau,
    potential strength g, coupling eps, coupling mode, propagator form."""

    n: int
    tau: float
    g: float = 1.0
    eps: float = 0.0
    mode: str = "global"
    propagator_form: str = "ring"
    windings: int = 3


class NormDriftError(RuntimeError):
    """Raised when the state norm drifts beyond tolerance during evolution."""

    def __init__(self, kick: int, norm_sq: float, tol: float):
        self.kick = kick
        self.norm_sq = norm_sq
        self.tol = tol
        super().__init__(
            f"norm drift at kick {kick}: |psi|^2 = {norm_sq!r} deviates from 1 "
            f"by {abs(norm_sq - 1.0):.3e} (tolerance {tol:.3e})")


def _check_params(p: QuantumParams) -> None:
    if int(p.n) < 2:
        raise ValueError(f"chain length must be >= 2, got {p.n}")
    if not (np.isfinite(p.tau) and p.tau > 0):
        raise ValueError(f"tau must be positive and finite, got {p.tau}")
    if p.mode not in ("global", "local"):
        raise ValueError(f"mode must be 'global' or 'local', got {p.mode!r}")
    if p.propagator_form not in ("ring", "bessel"):
        raise ValueError(
            f"propagator_form must be 'ring' or 'bessel', got {p.propagator_form!r}")


def initial_delta_state(n: int, x0: int, y0: int) -> np.ndarray:
    """Product state with A's down spin at site x0 and B's at y0 (1-based)."""
    n, x0, y0 = int(n), int(x0), int(y0)
    if n < 2:
        raise ValueError(f"chain length must be >= 2, got {n}")
    if not (1 <= x0 <= n):
        raise ValueError(f"x0 must be in 1..{n}, got {x0}")
    if not (1 <= y0 <= n):
        raise ValueError(f"y0 must be in 1..{n}, got {y0}")
    psi = np.zeros((n, n), dtype=complex)
    psi[x0 - 1, y0 - 1] = 1.0
    return psi


def kick_phase_grid(params: QuantumParams) -> np.ndarray:
    """Per-(x, y) kick phase for the selected coupling mode; unit modulus."""
    _check_params(params)
    n, g, eps = int(params.n), params.g, params.eps
    c = np.cos(2.0 * np.pi * np.arange(1, n + 1) / n)
    cx, cy = c[:, None], c[None, :]
    if params.mode == "global":
        return np.exp(1j * (g * cx + g * cy - 2.0 * eps * cx * cy))
    off = 1.0 - np.eye(n)
    return np.exp(1j * (g + eps * off) * (cx + cy))


def build_propagator(params: QuantumParams) -> np.ndarray:
    """Single-chain propagator for one inter-kick interval (t = tau / 2 pi)."""
    _check_params(params)
    t = params.tau / (2.0 * np.pi)
    if params.propagator_form == "bessel":
        return bessel_propagator(int(params.n), t, params.windings)
    return ring_propagator(int(params.n), t)


def evolve_one_kick(psi: np.ndarray, prop: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """One driving period: both chains propagate, then the kick phase acts."""
    if psi.shape != prop.shape or psi.shape != phases.shape:
        raise ValueError(
            f"dimension mismatch: psi {psi.shape}, prop {prop.shape}, phases {phases.shape}")
    return phases * (prop @ psi @ prop.T)


def evolve(psi0: np.ndarray, params: QuantumParams, kicks: int,
           recorder: Optional[Callable[[int, np.ndarray], None]] = None,
           norm_tol: float = 1e-8) -> np.ndarray:
    """Apply ``kicks`` driving periods to psi0.

    The recorder, when given, is called once per kick as recorder(k, psi)
    with the post-kick state, k = 1..kicks in order.  The state norm is
    checked after every kick; drifting more than ``norm_tol`` from 1 raises
    NormDriftError with diagnostics.
    """
    _check_params(params)
    kicks = int(kicks)
    if kicks < 0:
        raise ValueError(f"kicks must be >= 0, got {kicks}")
    psi = np.array(psi0, dtype=complex)
    n = int(params.n)
    if psi.shape != (n, n):
        raise ValueError(f"state must have shape ({n}, {n}), got {psi.shape}")
    if kicks == 0:
        return psi
    prop = build_propagator(params)
    phases = kick_phase_grid(params)
    for k in range(1, kicks + 1):
        psi = phases * (prop @ psi @ prop.T)
        norm_sq = float(np.vdot(psi, psi).real)
        if abs(norm_sq - 1.0) > norm_tol:
            raise NormDriftError(k, norm_sq, norm_tol)
        if recorder is not None:
            recorder(k, psi)
    return psi
