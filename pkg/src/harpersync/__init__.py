"""Measure synchronization in coupled kicked-Harper maps and its quantum
counterpart in the one-magnon sector of two coupled N-qubit chains."""

from .classical import (MapParams, average_interaction_energy, kick_step,
                        simulate_trajectory, step_interaction_energy,
                        uncoupled_jacobian)
from .measure_sync import (DensityGrid, SyncVerdict, build_density_grid,
                           default_rho_c, density_difference, detect_kink,
                           interaction_energy_curve, sync_verdict)
from .observables import (QubitPairDistribution, concurrence_between_systems,
                          coupling_energy, hopping_energy, linear_entropy,
                          mutual_information_map, pair_mutual_information,
                          qubit_pair_distribution, reduced_density,
                          schmidt_entropy, von_neumann_entropy)
from .propagator import bessel_propagator, ring_propagator
from .quantum import (NormDriftError, QuantumParams, build_propagator, evolve,
                      evolve_one_kick, initial_delta_state, kick_phase_grid)
from .sweep import (ClassicalSweepResult, SweepSurface, default_eps_axis,
                    default_quantum_ic, interior_extremum_onset,
                    resolve_workers, run_classical_sweep, run_quantum_sweep)

__version__ = "0.1.0"

__all__ = [
    "MapParams", "kick_step", "simulate_trajectory", "step_interaction_energy",
    "average_interaction_energy", "uncoupled_jacobian",
    "DensityGrid", "SyncVerdict", "build_density_grid", "density_difference",
    "sync_verdict", "default_rho_c", "interaction_energy_curve", "detect_kink",
    "ring_propagator", "bessel_propagator",
    "QuantumParams", "NormDriftError", "initial_delta_state", "kick_phase_grid",
    "build_propagator", "evolve_one_kick", "evolve",
    "QubitPairDistribution", "hopping_energy", "coupling_energy",
    "reduced_density", "von_neumann_entropy", "schmidt_entropy",
    "linear_entropy", "concurrence_between_systems", "qubit_pair_distribution",
    "pair_mutual_information", "mutual_information_map",
    "SweepSurface", "ClassicalSweepResult", "default_eps_axis",
    "default_quantum_ic", "resolve_workers", "run_quantum_sweep",
    "run_classical_sweep", "interior_extremum_onset",
    "__version__",
]
