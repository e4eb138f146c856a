"""Command-line front end.

Subcommands map one-to-one onto the reproduction scenarios:

    harpersync classical trajectory --tau 0.3 --eps 0.3 --outdir out
    harpersync classical jpd        --tau 0.3 --eps 0.7 --outdir out
    harpersync classical sweep      --tau 0.3 --outdir out
    harpersync quantum  evolve      --tau 0.3 --eps 0.5 --outdir out
    harpersync quantum  sweep       --tau 0.3 --outdir out
    harpersync quantum  mi-map      --tau 0.3 --eps 0.5 --outdir out

Exit codes: 0 success, 2 configuration error, 3 runtime numeric failure
(for instance norm drift beyond tolerance) or I/O failure.  The sweep
worker count is capped by the HARPER_SYNC_THREADS environment variable.
"""

import sys

import numpy as np

from . import io as iomod
from .classical import MapParams, simulate_trajectory
from .config import ConfigError, parse_config, resolve_eps_axis
from .measure_sync import (build_density_grid, default_rho_c, density_difference,
                           detect_kink, sync_verdict)
from .observables import (coupling_energy, hopping_energy, mutual_information_map,
                          schmidt_entropy)
from .quantum import NormDriftError, QuantumParams, evolve, initial_delta_state
from .sweep import run_classical_sweep, run_quantum_sweep

__all__ = ["main"]


def _map_params(cfg, eps) -> MapParams:
    return MapParams(tau=cfg.tau, g=cfg.g, eps=eps, coupling_at=cfg.coupling_at)


def _quantum_params(cfg, eps) -> QuantumParams:
    return QuantumParams(n=cfg.n, tau=cfg.tau, g=cfg.g, eps=eps, mode=cfg.coupling,
                         propagator_form=cfg.propagator_form, windings=cfg.windings)


def _classical_trajectory(cfg):
    traj = simulate_trajectory(cfg.ic, _map_params(cfg, cfg.eps), cfg.n_total, cfg.n_transient)
    return {"trajectory": traj}


def _classical_jpd(cfg):
    traj = simulate_trajectory(cfg.ic, _map_params(cfg, cfg.eps), cfg.n_total, cfg.n_transient)
    grid_a = build_density_grid(traj[:, 0:2], cfg.grid_m)
    grid_b = build_density_grid(traj[:, 2:4], cfg.grid_m)
    delta, delta_max = density_difference(grid_a, grid_b)
    rho_c = cfg.rho_c if cfg.rho_c is not None else default_rho_c(cfg.tau)
    return {"grid_a": grid_a, "grid_b": grid_b, "grid_delta": delta,
            "verdict": sync_verdict(delta_max, rho_c)}


def _classical_sweep(cfg):
    result = run_classical_sweep(
        cfg.ic, _map_params(cfg, 0.0), eps_axis=resolve_eps_axis(cfg),
        lengths=(cfg.n_transient, cfg.n_total), probes=cfg.probes,
        m=cfg.grid_m, rho_c=cfg.rho_c, workers=cfg.workers)
    kink = detect_kink(result.curve, cfg.kink_factor)
    return {"classical_sweep": result, "kink_eps": kink}


def _quantum_evolve(cfg):
    kicks = cfg.kicks
    params = _quantum_params(cfg, cfg.eps)
    psi0 = initial_delta_state(cfg.n, cfg.ic[0], cfg.ic[1])
    series = {name: np.empty(kicks + 1) for name in ("e_a", "e_b", "delta_e", "e_int", "s_a")}
    series["e_a"][0] = hopping_energy(psi0, "A")
    series["e_b"][0] = hopping_energy(psi0, "B")
    series["delta_e"][0] = series["e_a"][0] - series["e_b"][0]
    series["e_int"][0] = 0.0  # defined as 0 before any kick acts
    series["s_a"][0] = schmidt_entropy(psi0)

    def record(k, psi):
        ea = hopping_energy(psi, "A")
        eb = hopping_energy(psi, "B")
        series["e_a"][k] = ea
        series["e_b"][k] = eb
        series["delta_e"][k] = ea - eb
        series["e_int"][k] = coupling_energy(psi, cfg.eps, cfg.coupling)
        series["s_a"][k] = schmidt_entropy(psi)

    evolve(psi0, params, kicks, record, norm_tol=cfg.norm_tol)
    return {"series": series}


def _quantum_sweep(cfg):
    surface = run_quantum_sweep(
        _quantum_params(cfg, 0.0), eps_axis=resolve_eps_axis(cfg), kicks=cfg.kicks,
        observables=cfg.observables, ic=cfg.ic, workers=cfg.workers,
        norm_tol=cfg.norm_tol, onset_prominence=cfg.onset_prominence)
    return {"surface": surface}


def _quantum_mi_map(cfg):
    params = _quantum_params(cfg, cfg.eps)
    psi = evolve(initial_delta_state(cfg.n, cfg.ic[0], cfg.ic[1]), params, cfg.kicks,
                 norm_tol=cfg.norm_tol)
    mi = mutual_information_map(psi)
    flat = int(np.argmax(mi))
    ja, jb = np.unravel_index(flat, mi.shape)
    meta = {"n": cfg.n, "tau": cfg.tau, "g": cfg.g, "eps": cfg.eps,
            "kicks": cfg.kicks, "ic": list(cfg.ic), "coupling": cfg.coupling,
            "log_base": 2.0, "max": float(mi.max()),
            "argmax_j_a": int(ja) + 1, "argmax_j_b": int(jb) + 1}
    return {"mi_map": mi, "mi_meta": meta}


_ACTIONS = {
    ("classical", "trajectory"): _classical_trajectory,
    ("classical", "jpd"): _classical_jpd,
    ("classical", "sweep"): _classical_sweep,
    ("quantum", "evolve"): _quantum_evolve,
    ("quantum", "sweep"): _quantum_sweep,
    ("quantum", "mi-map"): _quantum_mi_map,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        artifacts = _ACTIONS[(cfg.mode, cfg.action)](cfg)
        paths = iomod.write_outputs(artifacts, cfg)
    except NormDriftError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0
