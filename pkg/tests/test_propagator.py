import numpy as np
import pytest

from spinpol.errors import DimensionMismatch, NonFiniteError
from spinpol.linalg import evolve_unitary, partial_trace, purity
from spinpol.measures import polarization
from spinpol.propagator import Propagator, TimeGrid, evolve
from spinpol.spins import ChainSpec, build_hamiltonian, build_zz
from spinpol.states import product_state, rho_minus, rho_plus

from conftest import random_density, random_hermitian


def test_time_grid_validation():
    assert len(TimeGrid.linspace(0, 1, 11)) == 11
    assert TimeGrid((0, 0.5))[1] == 0.5
    with pytest.raises(ValueError):
        TimeGrid(())
    with pytest.raises(ValueError):
        TimeGrid((-1.0, 0.0))
    with pytest.raises(ValueError):
        TimeGrid((1.0, 0.5))
    with pytest.raises(NonFiniteError):
        TimeGrid((0.0, np.inf))


def test_zero_time_returns_initial_state(rng):
    h = random_hermitian(4, rng)
    rho0 = random_density(4, rng)
    (state,) = evolve(h, rho0, TimeGrid((0.0,))).states
    np.testing.assert_array_equal(state, rho0)


def test_commuting_pair_is_frozen():
    h = build_zz(ChainSpec(n=2))
    for state in evolve(h, rho_plus(2), TimeGrid.linspace(0, 50, 11)).states:
        np.testing.assert_allclose(state, rho_plus(2), atol=1e-15)


def test_matches_explicit_conjugation(rng):
    h = random_hermitian(8, rng)
    rho0 = random_density(8, rng)
    result = evolve(h, rho0, TimeGrid((0.3, 1.7)))
    for tau, state in zip(result.grid, result.states):
        u = evolve_unitary(h, tau)
        assert np.linalg.norm(state - u @ rho0 @ u.conj().T) < 1e-12


def test_zero_drive_minus_oracle():
    # in the {|01>, |10>} block H = -kappa/4 (1 + sigma_x); the populations
    # swap with angular frequency kappa/2, so Pz1 = -cos(kappa tau / 2) / 2
    h = build_hamiltonian(ChainSpec(n=2, kappa=1.5))
    grid = TimeGrid.linspace(0, 25, 501)
    pz = np.array([polarization(r, 1, 2).pz for r in evolve(h, rho_minus(2), grid).states])
    assert np.max(np.abs(pz + 0.5 * np.cos(0.75 * np.array(grid.points)))) < 1e-12


@pytest.mark.parametrize(
    "spec,rho0",
    [
        (ChainSpec(n=2, irradiated=(1, 2), omega1=0.5), rho_plus(2)),
        (ChainSpec(n=3, irradiated=(1, 2), omega1=0.8), rho_minus(3)),
        (ChainSpec(n=4, irradiated=(1, 4), omega1=1.3, model="zz-only"), product_state([0, 1, 0, 1])),
    ],
)
def test_invariants(spec, rho0):
    h = build_hamiltonian(spec)
    e0 = np.trace(rho0 @ h).real
    for state in evolve(h, rho0, TimeGrid.linspace(0, 40, 201)).states:
        assert abs(np.trace(state) - 1) < 1e-11
        assert np.max(np.abs(state - state.conj().T)) < 1e-11
        assert abs(purity(state) - 1) < 1e-9
        assert abs(np.trace(state @ h).real - e0) < 1e-10


def test_mixed_state_purity_conserved(rng):
    h = random_hermitian(8, rng)
    rho0 = random_density(8, rng)
    p0 = purity(rho0)
    for state in evolve(h, rho0, TimeGrid.linspace(0, 10, 21)).states:
        assert abs(purity(state) - p0) < 1e-9


def test_composition(rng):
    h = random_hermitian(8, rng)
    rho0 = random_density(8, rng)
    t1, t2 = 1.3, 4.1
    mid = evolve(h, rho0, TimeGrid((t1,))).states[0]
    two_step = evolve(h, mid, TimeGrid((t2 - t1,))).states[0]
    direct = evolve(h, rho0, TimeGrid((t2,))).states[0]
    assert np.linalg.norm(two_step - direct) < 1e-9


@pytest.mark.parametrize("n", [4, 6])
def test_frozen_spectators(n):
    spec = ChainSpec(n=n, model="zz-only", irradiated=(1, n), omega1=0.5)
    rho0 = product_state([0] + [1, 0] * ((n - 2) // 2) + [1])
    result = evolve(build_hamiltonian(spec), rho0, TimeGrid.linspace(0, 200, 101))
    first = [partial_trace(rho0, [k], n) for k in range(2, n)]
    for state in result.states:
        for k, ref in zip(range(2, n), first):
            assert np.max(np.abs(partial_trace(state, [k], n) - ref)) < 1e-10
        assert abs(purity(partial_trace(state, [1, n], n)) - 1) < 1e-9


def test_lazy_states_sequence():
    h = build_hamiltonian(ChainSpec(n=2, irradiated=(1,), omega1=1.0))
    result = evolve(h, rho_plus(2), TimeGrid.linspace(0, 1, 5))
    assert len(result.states) == 5
    sliced = result.states[1:3]
    assert len(sliced) == 2
    np.testing.assert_array_equal(sliced[1], result.states[2])
    np.testing.assert_array_equal(result.states[-1], result.states[4])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evolve(np.eye(4), rho_plus(3), TimeGrid((0.0,)))
    with pytest.raises(DimensionMismatch):
        Propagator(np.eye(2)).prepare(np.eye(4))
