"""Deterministic parameter sweeps over coupling strength.

Each eps value is an independent pure job; jobs run either inline or on a
process pool, and results are always assembled in eps order, so surfaces
do not depend on worker count or completion order.  The worker count comes
from, in order: the explicit ``workers`` argument, the HARPER_SYNC_THREADS
environment variable, then os.cpu_count().

Recorded quantum observables per kick:

* ``dE``   - hopping-energy difference E_A - E_B,
* ``eint`` - interaction energy normalized by 2 eps (global mode) or eps
             (local mode); at eps = 0 the raw interaction energy (zero) is
             recorded instead of dividing,
* ``SA``   - entanglement entropy of chain A (nats).

The normalized-interaction-energy surface also yields an onset diagnostic:
the first kick at which the profile over eps develops an interior global
extremum of prominence above a threshold.  With the sign conventions used
here the profile develops an interior *maximum* near eps = 0.5.
"""

import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classical import MapParams, average_interaction_energy, simulate_trajectory
from .measure_sync import (SyncVerdict, build_density_grid, default_rho_c,
                           density_difference, sync_verdict)
from .observables import coupling_energy, hopping_energy, schmidt_entropy
from .quantum import QuantumParams, evolve, initial_delta_state

__all__ = [
    "SweepSurface",
    "ClassicalSweepResult",
    "OBSERVABLE_NAMES",
    "default_eps_axis",
    "default_quantum_ic",
    "resolve_workers",
    "run_quantum_sweep",
    "run_classical_sweep",
    "interior_extremum_onset",
]

OBSERVABLE_NAMES = ("dE", "eint", "SA")

ENV_WORKERS = "HARPER_SYNC_THREADS"


@dataclass
class SweepSurface:
    """Observable surfaces indexed by (kick, eps) plus reproducibility meta."""

    eps_axis: np.ndarray
    kick_axis: np.ndarray
    values: dict
    meta: dict = field(default_factory=dict)


@dataclass
class ClassicalSweepResult:
    """E_int(eps) curve plus synchronization verdicts at probe couplings."""

    curve: np.ndarray
    verdicts: dict
    meta: dict = field(default_factory=dict)


def default_eps_axis(include_zero: bool) -> np.ndarray:
    """Step-0.01 coupling grid up to 1.0; classical scans include eps = 0,
    quantum scans of normalized observables start at 0.01."""
    start = 0.0 if include_zero else 0.01
    return np.round(np.arange(start, 1.0001, 0.01), 2)


def default_quantum_ic(n: int, mode: str):
    """Down-spin start sites: (1, N/2) for global coupling, (1, N/5) local."""
    return (1, n // 2) if mode == "global" else (1, n // 5)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        env = os.environ.get(ENV_WORKERS)
        workers = int(env) if env else (os.cpu_count() or 1)
    workers = int(workers)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def _check_eps_axis(eps_axis) -> np.ndarray:
    axis = np.asarray(eps_axis, dtype=float)
    if axis.size == 0:
        raise ValueError("eps axis is empty")
    if np.any(~np.isfinite(axis)) or np.any(axis < 0):
        raise ValueError("eps axis entries must be finite and >= 0")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise ValueError("eps axis must be strictly increasing")
    return axis


def _run_jobs(jobs, job_fn, workers, stream_dir, stream_name):
    """Execute pure jobs and return {index: result}, independent of order."""
    results = {}
    if stream_dir is not None:
        os.makedirs(stream_dir, exist_ok=True)

    def keep(idx, res):
        if stream_dir is not None:
            np.savez(os.path.join(stream_dir, f"{stream_name}_{idx:04d}.npz"),
                     **{k: np.asarray(v) for k, v in res.items()})
        results[idx] = res

    if workers == 1 or len(jobs) == 1:
        for job in jobs:
            idx, res = job_fn(job)
            keep(idx, res)
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            futures = [pool.submit(job_fn, job) for job in jobs]
            for fut in as_completed(futures):
                idx, res = fut.result()
                keep(idx, res)
    return results


def _quantum_job(args):
    (idx, eps, n, tau, g, mode, form, windings, x0, y0, kicks, obs, norm_tol) = args
    params = QuantumParams(n=n, tau=tau, g=g, eps=eps, mode=mode,
                           propagator_form=form, windings=windings)
    psi0 = initial_delta_state(n, x0, y0)
    rec = {name: np.empty(kicks + 1) for name in obs}
    if "dE" in rec:
        rec["dE"][0] = hopping_energy(psi0, "A") - hopping_energy(psi0, "B")
    if "eint" in rec:
        rec["eint"][0] = 0.0  # defined as 0 before any kick acts
    if "SA" in rec:
        rec["SA"][0] = schmidt_entropy(psi0)
    div = 2.0 * eps if mode == "global" else eps

    def cb(k, psi):
        if "dE" in rec:
            rec["dE"][k] = hopping_energy(psi, "A") - hopping_energy(psi, "B")
        if "eint" in rec:
            e = coupling_energy(psi, eps, mode)
            rec["eint"][k] = e / div if div != 0.0 else e
        if "SA" in rec:
            rec["SA"][k] = schmidt_entropy(psi)

    evolve(psi0, params, kicks, cb, norm_tol)
    return idx, rec


def run_quantum_sweep(template: QuantumParams, eps_axis=None, kicks: int = 1000,
                      observables=OBSERVABLE_NAMES, ic=None,
                      workers: Optional[int] = None, stream_dir: Optional[str] = None,
                      norm_tol: float = 1e-8,
                      onset_prominence: float = 0.2) -> SweepSurface:
    """Evolve the joint state for every eps on the axis, recording the
    requested observables after every kick (row 0 is the pre-kick state).

    Surfaces have shape (kicks + 1, len(eps_axis)) and are assembled in eps
    order regardless of scheduling.  When ``eint`` is recorded, the onset
    diagnostic is stored in meta["onset_kick"].  ``stream_dir``, when given,
    receives one npz per eps as jobs complete, bounding resident memory.
    """
    if eps_axis is None:
        eps_axis = default_eps_axis(include_zero=False)
    axis = _check_eps_axis(eps_axis)
    kicks = int(kicks)
    if kicks < 1:
        raise ValueError(f"kicks must be >= 1, got {kicks}")
    obs = tuple(observables)
    for name in obs:
        if name not in OBSERVABLE_NAMES:
            raise ValueError(f"unknown observable {name!r}; expected subset of {OBSERVABLE_NAMES}")
    if not obs:
        raise ValueError("no observables requested")
    n = int(template.n)
    if ic is None:
        ic = default_quantum_ic(n, template.mode)
    x0, y0 = int(ic[0]), int(ic[1])
    workers = resolve_workers(workers)

    jobs = [(i, float(eps), n, template.tau, template.g, template.mode,
             template.propagator_form, template.windings, x0, y0, kicks, obs, norm_tol)
            for i, eps in enumerate(axis)]
    results = _run_jobs(jobs, _quantum_job, workers, stream_dir, "eps")

    values = {name: np.empty((kicks + 1, axis.size)) for name in obs}
    for i in range(axis.size):
        rec = results[i]
        for name in obs:
            values[name][:, i] = rec[name]

    meta = {
        "kind": "quantum", "n": n, "tau": template.tau, "g": template.g,
        "mode": template.mode, "propagator_form": template.propagator_form,
        "windings": template.windings, "ic": (x0, y0), "kicks": kicks,
        "observables": list(obs), "norm_tol": norm_tol,
    }
    if "eint" in values:
        meta["onset_prominence"] = onset_prominence
        # the onset profile needs at least 3 positive-eps columns to exist
        meta["onset_kick"] = (
            interior_extremum_onset(values["eint"], axis, onset_prominence)
            if int((axis > 0).sum()) >= 3 else None)
    return SweepSurface(eps_axis=axis, kick_axis=np.arange(kicks + 1),
                        values=values, meta=meta)


def interior_extremum_onset(eint_surface, eps_axis, prominence: float = 0.2) -> Optional[int]:
    """First kick at which the normalized interaction-energy profile over
    eps has an interior global maximum rising above both endpoints by more
    than ``prominence``.  Columns at eps = 0 (raw energies) are ignored.
    Returns None when no kick qualifies.
    """
    surface = np.asarray(eint_surface, dtype=float)
    axis = np.asarray(eps_axis, dtype=float)
    mask = axis > 0
    if mask.sum() < 3:
        raise ValueError("need at least 3 positive-eps columns")
    vals = surface[:, mask]
    for k in range(1, surface.shape[0]):
        f = vals[k]
        i = int(np.argmax(f))
        if 0 < i < f.size - 1 and f[i] - max(f[0], f[-1]) > prominence:
            return k
    return None


def _classical_job(args):
    (idx, eps, s0, tau, g, coupling_at, n_transient, n_total, want_grid, m) = args
    params = MapParams(tau=tau, g=g, eps=eps, coupling_at=coupling_at)
    traj = simulate_trajectory(s0, params, n_total, n_transient)
    e_int = average_interaction_energy(traj, eps)
    rec = {"eps": eps, "e_int": e_int}
    if want_grid:
        ga = build_density_grid(traj[:, 0:2], m)
        gb = build_density_grid(traj[:, 2:4], m)
        _, delta_max = density_difference(ga, gb)
        rec["delta_max"] = delta_max
    return idx, rec


def run_classical_sweep(s0, base: MapParams, eps_axis=None,
                        lengths=(10_000, 1_010_000), probes=(0.3, 0.7),
                        m: int = 20, rho_c: Optional[float] = None,
                        workers: Optional[int] = None,
                        stream_dir: Optional[str] = None) -> ClassicalSweepResult:
    """E_int(eps) curve over the axis plus density-grid synchronization
    verdicts at the probe couplings (fresh trajectories, M x M fraction
    grids, threshold rho_c defaulting to the tau-dependent scenario value).
    """
    if eps_axis is None:
        eps_axis = default_eps_axis(include_zero=True)
    axis = _check_eps_axis(eps_axis)
    n_transient, n_total = int(lengths[0]), int(lengths[1])
    probes = tuple(float(p) for p in probes)
    threshold = default_rho_c(base.tau) if rho_c is None else float(rho_c)
    workers = resolve_workers(workers)

    jobs = [(i, float(eps), tuple(float(v) for v in s0), base.tau, base.g,
             base.coupling_at, n_transient, n_total, False, m)
            for i, eps in enumerate(axis)]
    k0 = len(jobs)
    jobs += [(k0 + j, p, tuple(float(v) for v in s0), base.tau, base.g,
              base.coupling_at, n_transient, n_total, True, m)
             for j, p in enumerate(probes)]
    results = _run_jobs(jobs, _classical_job, workers, stream_dir, "eps")

    curve = np.empty((axis.size, 2))
    for i in range(axis.size):
        curve[i, 0] = results[i]["eps"]
        curve[i, 1] = results[i]["e_int"]
    verdicts = {}
    for j, p in enumerate(probes):
        rec = results[k0 + j]
        verdicts[p] = sync_verdict(rec["delta_max"], threshold)

    meta = {
        "kind": "classical", "s0": tuple(float(v) for v in s0), "tau": base.tau,
        "g": base.g, "coupling_at": base.coupling_at,
        "n_transient": n_transient, "n_total": n_total,
        "m": m, "rho_c": threshold, "probes": list(probes),
    }
    return ClassicalSweepResult(curve=curve, verdicts=verdicts, meta=meta)
