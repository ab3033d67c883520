import numpy as np
import pytest

from posnerspin.dynamics import (
    SINGLET,
    TRIPLET_0,
    TRIPLET_MINUS,
    TRIPLET_PLUS,
    EigenPropagator,
    PairState,
    TimeGrid,
    brute_force_pair,
    evolve_state,
    pair_reduced_density,
    pair_series,
    singlet_triplet_populations,
)
from posnerspin.errors import DimensionGuardError
from posnerspin.hamiltonian import (
    FieldSpec,
    build_hamiltonian,
    coupling_topology,
    pair_coupling,
    posner_system,
)
from posnerspin.measures import concurrence
from posnerspin.spincore import Operator, SpinSite, SpinSystem

SINGLET_PROJECTOR = np.outer(SINGLET, SINGLET.conj())


def toy_propagator(j_hz=0.1, b0=50e-6, gammas=(17.24, 42.577)):
    system = SpinSystem([SpinSite("A", 0.5, gammas[0]), SpinSite("B", 0.5, gammas[1])])
    return EigenPropagator(build_hamiltonian(system, FieldSpec(b0), pair_coupling(j_hz)))


def posner_propagator(topology="symmetric", doping="none", b0=50e-6, scale=1.0):
    system = posner_system(doping)
    couplings = coupling_topology(topology, doping=doping, scale=scale)
    return EigenPropagator(build_hamiltonian(system, FieldSpec(b0), couplings))


def test_time_grid_defaults_and_validation():
    grid = TimeGrid()
    assert grid.t_start == 0.0
    assert grid.t_end == 500.0
    assert grid.times.size == 2001
    np.testing.assert_allclose(np.diff(grid.times), 0.25)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 0.0, 10)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1)


def test_propagator_is_unitary():
    prop = posner_propagator()
    for t in (0.0, 0.37, 12.5, 500.0):
        u = prop.unitary(t)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(64), atol=1e-10)


def test_evolve_state_identity_at_t0():
    prop = toy_propagator()
    rho0 = Operator(prop.system, np.diag([0.5, 0.5, 0.0, 0.0]), hermitian=True)
    np.testing.assert_allclose(evolve_state(prop, rho0, 0.0).data, rho0.data, atol=1e-14)


def test_evolve_state_eigenstate_is_stationary():
    prop = toy_propagator()
    v = prop.eigenvectors[:, 2]
    rho0 = Operator(prop.system, np.outer(v, v.conj()), hermitian=True)
    for t in (1.0, 100.0):
        np.testing.assert_allclose(evolve_state(prop, rho0, t).data, rho0.data, atol=1e-12)


def test_evolve_state_preserves_purity_and_trace():
    prop = toy_propagator()
    rho0 = Operator(
        prop.system,
        0.7 * SINGLET_PROJECTOR + 0.3 * np.eye(4) / 4,
        hermitian=True,
    )
    purity0 = np.trace(rho0.data @ rho0.data).real
    for t in np.linspace(0.0, 50.0, 7):
        rho = evolve_state(prop, rho0, t)
        assert abs(np.trace(rho.data).real - 1.0) < 1e-10
        assert abs(np.trace(rho.data @ rho.data).real - purity0) < 1e-10


def test_evolve_state_validates_input():
    prop = toy_propagator()
    with pytest.raises(ValueError, match="trace"):
        evolve_state(prop, Operator(prop.system, np.eye(4), hermitian=True), 1.0)


def test_st_basis_is_orthonormal():
    basis = np.stack([SINGLET, TRIPLET_0, TRIPLET_PLUS, TRIPLET_MINUS])
    np.testing.assert_allclose(basis @ basis.conj().T, np.eye(4), atol=1e-15)


def test_populations_trivial_states():
    singlet = PairState(SINGLET_PROJECTOR, ("A", "B"))
    assert singlet_triplet_populations(singlet) == pytest.approx((1.0, 0.0, 0.0, 0.0))
    mixed = PairState(np.eye(4) / 4, ("A", "B"))
    assert singlet_triplet_populations(mixed) == pytest.approx((0.25,) * 4)
    up_up = PairState(np.diag([1.0, 0.0, 0.0, 0.0]), ("A", "B"))
    pops = singlet_triplet_populations(up_up)
    assert pops.triplet_plus == pytest.approx(1.0)
    assert pops.singlet == pytest.approx(0.0)


def test_pair_state_validation():
    with pytest.raises(ValueError, match="4x4"):
        PairState(np.eye(3) / 3, ("A", "B"))
    with pytest.raises(ValueError, match="trace"):
        PairState(np.eye(4), ("A", "B"))
    with pytest.raises(ValueError, match="Hermitian"):
        PairState(np.eye(4) / 4 + 1e-6 * np.triu(np.ones((4, 4)), 1), ("A", "B"))
    with pytest.raises(ValueError, match="negative"):
        PairState(np.diag([1.1, -0.1, 0.0, 0.0]), ("A", "B"))


def test_initial_condition_singlet_and_mixed():
    prop = posner_propagator()
    on_entangled = pair_reduced_density(prop, prop, (0, 0), (0, 0), 0.0)
    np.testing.assert_allclose(on_entangled.rho, SINGLET_PROJECTOR, atol=1e-12)
    elsewhere = pair_reduced_density(prop, prop, (0, 0), (3, 3), 0.0)
    np.testing.assert_allclose(elsewhere.rho, np.eye(4) / 4, atol=1e-12)


def test_uncoupled_uniform_gamma_keeps_singlet():
    # The singlet is invariant under collective rotations, so with J = 0 and
    # equal gammas nothing moves.
    prop = posner_propagator(topology="none")
    for t in (0.0, 3.7, 250.0, 500.0):
        pair = pair_reduced_density(prop, prop, (0, 0), (0, 0), t)
        np.testing.assert_allclose(pair.rho, SINGLET_PROJECTOR, atol=1e-9)
        assert concurrence(pair) == pytest.approx(1.0, abs=1e-9)


def test_factorized_matches_brute_force_on_toy():
    prop = toy_propagator()
    for t in (0.0, 0.9, 7.3, 120.0, 499.0):
        fast = pair_reduced_density(prop, prop, (0, 0), (0, 0), t)
        slow = brute_force_pair(prop, prop, (0, 0), (0, 0), t)
        assert np.abs(fast.rho - slow.rho).max() < 1e-10


def test_factorized_matches_brute_force_cross_pair():
    prop = toy_propagator(j_hz=0.25)
    for t in (1.5, 42.0):
        fast = pair_reduced_density(prop, prop, (0, 0), (0, 1), t)
        slow = brute_force_pair(prop, prop, (0, 0), (0, 1), t)
        assert np.abs(fast.rho - slow.rho).max() < 1e-10


def test_brute_force_large_joint_path_matches_factorized():
    # Five spin-1/2 sites per molecule: joint dimension 1024 exercises the
    # column-evolution path instead of the literal Kronecker propagator.
    sites = [SpinSite(f"S{k}", 0.5, 17.24) for k in range(5)]
    system = SpinSystem(sites)
    rng = np.random.default_rng(5)
    j = np.zeros((5, 5))
    for i in range(5):
        for k in range(i + 1, 5):
            j[i, k] = j[k, i] = rng.uniform(0.02, 0.2)
    from posnerspin.hamiltonian import CouplingMatrix

    prop = EigenPropagator(
        build_hamiltonian(system, FieldSpec(50e-6), CouplingMatrix(j))
    )
    for t in (2.0, 77.0):
        fast = pair_reduced_density(prop, prop, (0, 0), (2, 2), t)
        slow = brute_force_pair(prop, prop, (0, 0), (2, 2), t)
        assert np.abs(fast.rho - slow.rho).max() < 1e-9


def test_brute_force_guard_on_doped_system():
    prop = posner_propagator(doping="Li7")
    assert prop.system.dim == 1024
    with pytest.raises(DimensionGuardError, match="joint"):
        brute_force_pair(prop, prop, (0, 0), (0, 0), 1.0)


def test_entangled_site_must_be_spin_half():
    prop = posner_propagator(doping="Li6")
    with pytest.raises(ValueError, match="spin-1/2"):
        pair_reduced_density(prop, prop, (6, 6), (0, 0), 1.0)
    with pytest.raises(ValueError, match="spin-1/2"):
        pair_reduced_density(prop, prop, (0, 0), (7, 7), 1.0)


def test_site_indices_validated():
    prop = toy_propagator()
    with pytest.raises(ValueError, match="out of range"):
        pair_reduced_density(prop, prop, (0, 0), (0, 5), 1.0)


def test_pair_series_states_are_valid_and_sum_to_one():
    prop = posner_propagator()
    times = TimeGrid(0.0, 500.0, 101).times
    states = pair_series(prop, prop, (0, 0), (0, 0), times)
    assert len(states) == times.size
    assert states[0].labels == ("P0", "P0")
    for state in states[::10]:
        pops = singlet_triplet_populations(state)
        assert abs(sum(pops) - 1.0) < 1e-9
        assert min(np.linalg.eigvalsh(state.rho)) > -1e-9


def test_pair_series_matches_single_time_calls():
    prop = posner_propagator()
    times = np.array([0.0, 13.0, 200.0])
    states = pair_series(prop, prop, (0, 0), (3, 3), times)
    for t, state in zip(times, states):
        single = pair_reduced_density(prop, prop, (0, 0), (3, 3), t)
        np.testing.assert_allclose(state.rho, single.rho, atol=1e-12)


def test_single_spin_marginals_stay_maximally_mixed():
    prop = posner_propagator(topology="strong_asymmetry")
    for t in (5.0, 60.0):
        pair = pair_reduced_density(prop, prop, (0, 0), (1, 1), t)
        rho = pair.rho.reshape(2, 2, 2, 2)
        np.testing.assert_allclose(np.einsum("ijkj->ik", rho), np.eye(2) / 2, atol=1e-10)
        np.testing.assert_allclose(np.einsum("jijk->ik", rho), np.eye(2) / 2, atol=1e-10)


def test_molecules_can_differ():
    # Different J on molecule B breaks the A/B symmetry of the correlators.
    prop_a = toy_propagator(j_hz=0.1)
    prop_b = toy_propagator(j_hz=0.4)
    fast = pair_reduced_density(prop_a, prop_b, (0, 0), (0, 0), 11.0)
    slow = brute_force_pair(prop_a, prop_b, (0, 0), (0, 0), 11.0)
    assert np.abs(fast.rho - slow.rho).max() < 1e-10
    symmetric = pair_reduced_density(prop_a, prop_a, (0, 0), (0, 0), 11.0)
    assert np.abs(fast.rho - symmetric.rho).max() > 1e-4
