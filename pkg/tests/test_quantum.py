import numpy as np
import pytest

from conftest import one_kick_unitary, random_state
from harpersync import (NormDriftError, QuantumParams, build_propagator,
                        evolve, evolve_one_kick, initial_delta_state,
                        kick_phase_grid, reduced_density, von_neumann_entropy)


def test_initial_delta_state():
    psi = initial_delta_state(6, 2, 5)
    assert psi.shape == (6, 6) and psi.dtype == complex
    assert psi[1, 4] == 1.0
    assert np.vdot(psi, psi).real == 1.0
    for bad in ((0, 3), (3, 0), (7, 3), (3, 7)):
        with pytest.raises(ValueError):
            initial_delta_state(6, *bad)


@pytest.mark.parametrize("mode", ["global", "local"])
def test_phase_grid_free_case_is_ones(mode):
    phases = kick_phase_grid(QuantumParams(n=8, tau=0.3, g=0.0, eps=0.0, mode=mode))
    assert np.array_equal(phases, np.ones((8, 8), dtype=complex))


def test_phase_grid_global_corner_entry():
    # x = N and y = N/2 give c(x) = 1 and c(y) = -1 exactly
    n, g, eps = 10, 1.3, 0.45
    phases = kick_phase_grid(QuantumParams(n=n, tau=0.3, g=g, eps=eps, mode="global"))
    assert abs(phases[n - 1, n // 2 - 1] - np.exp(2j * eps)) < 1e-12


def test_phase_grid_local_diagonal_ignores_eps():
    n, g = 9, 0.7
    with_eps = kick_phase_grid(QuantumParams(n=n, tau=0.3, g=g, eps=0.8, mode="local"))
    c = np.cos(2.0 * np.pi * np.arange(1, n + 1) / n)
    assert np.allclose(np.diag(with_eps), np.exp(2j * g * c), atol=1e-14)


@pytest.mark.parametrize("mode", ["global", "local"])
def test_phase_grid_unit_modulus_and_symmetry(mode):
    phases = kick_phase_grid(QuantumParams(n=12, tau=0.3, g=1.0, eps=0.6, mode=mode))
    assert np.allclose(np.abs(phases), 1.0, atol=1e-15)
    assert np.allclose(phases, phases.T, atol=1e-15)


def test_one_kick_trivial_operators():
    psi = random_state(7, 11)
    out = evolve_one_kick(psi, np.eye(7, dtype=complex), np.ones((7, 7), dtype=complex))
    assert np.array_equal(out, psi)
    with pytest.raises(ValueError):
        evolve_one_kick(psi, np.eye(6), np.ones((7, 7)))


@pytest.mark.parametrize("mode", ["global", "local"])
def test_two_kicks_match_brute_force_unitary(mode):
    n, tau, g, eps = 4, 0.3, 1.0, 0.7
    params = QuantumParams(n=n, tau=tau, g=g, eps=eps, mode=mode)
    psi0 = random_state(n, 23)
    u = one_kick_unitary(n, tau, g, eps, mode)
    ref = (u @ u @ psi0.reshape(-1)).reshape(n, n)
    out = evolve(psi0, params, 2)
    assert np.max(np.abs(out - ref)) <= 1e-10


def test_evolution_composes():
    params = QuantumParams(n=16, tau=0.3, g=1.0, eps=0.5)
    psi0 = initial_delta_state(16, 1, 8)
    onego = evolve(psi0, params, 7)
    twogo = evolve(evolve(psi0, params, 3), params, 4)
    assert np.max(np.abs(onego - twogo)) <= 1e-12


def test_zero_kicks_copies_input():
    psi0 = random_state(5, 7)
    out = evolve(psi0, QuantumParams(n=5, tau=0.3), 0)
    assert out is not psi0
    assert np.array_equal(out, psi0)


@pytest.mark.parametrize("mode", ["global", "local"])
def test_chain_exchange_symmetry(mode):
    params = QuantumParams(n=10, tau=0.3, g=1.0, eps=0.6, mode=mode)
    psi0 = random_state(10, 31)
    assert np.max(np.abs(evolve(psi0.T.copy(), params, 5)
                         - evolve(psi0, params, 5).T)) <= 1e-12


def test_recorder_sees_every_kick_in_order():
    params = QuantumParams(n=6, tau=0.3, eps=0.4)
    seen = []
    final = evolve(initial_delta_state(6, 1, 3), params, 4,
                   recorder=lambda k, psi: seen.append((k, psi)))
    assert [k for k, _ in seen] == [1, 2, 3, 4]
    assert seen[-1][1] is final
    norms = [float(np.vdot(p, p).real) for _, p in seen]
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_norm_drift_raises_with_diagnostics():
    params = QuantumParams(n=6, tau=0.3, eps=0.4)
    psi0 = 2.0 * initial_delta_state(6, 1, 3)
    with pytest.raises(NormDriftError) as exc:
        evolve(psi0, params, 3)
    assert exc.value.kick == 1
    assert exc.value.norm_sq == pytest.approx(4.0, rel=1e-9)
    assert exc.value.tol == 1e-8


def test_parameter_validation():
    psi0 = initial_delta_state(6, 1, 3)
    with pytest.raises(ValueError):
        evolve(psi0, QuantumParams(n=6, tau=0.3), -1)
    with pytest.raises(ValueError):
        evolve(psi0, QuantumParams(n=7, tau=0.3), 1)
    with pytest.raises(ValueError):
        evolve(psi0, QuantumParams(n=6, tau=0.0), 1)
    with pytest.raises(ValueError):
        evolve(psi0, QuantumParams(n=6, tau=0.3, mode="pairwise"), 1)
    with pytest.raises(ValueError):
        evolve(psi0, QuantumParams(n=6, tau=0.3, propagator_form="chebyshev"), 1)
    with pytest.raises(ValueError):
        build_propagator(QuantumParams(n=1, tau=0.3))


def test_uncoupled_product_state_stays_pure():
    params = QuantumParams(n=16, tau=0.3, g=1.0, eps=0.0)
    entropies = []
    evolve(initial_delta_state(16, 1, 8), params, 30,
           recorder=lambda k, psi: entropies.append(
               von_neumann_entropy(reduced_density(psi, "A"))))
    assert max(entropies) < 1e-10


def test_norm_is_preserved_over_long_runs():
    params = QuantumParams(n=100, tau=0.3, g=1.0, eps=0.5)
    evolve(initial_delta_state(100, 1, 50), params, 1000, norm_tol=1e-9)
