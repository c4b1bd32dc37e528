"""Test Gibbs states and entropy-matched effective temperatures"""

import math

import numpy as np
import pytest

from autothermo import qmat
from autothermo.thermo import (
    ENTROPY_MATCHED,
    FLAT_HAMILTONIAN,
    GROUND_DEGENERATE,
    DomainError,
    gibbs_relative_entropy,
    gibbs_state,
    solve_effective_temperature,
    thermal_energy,
    thermal_entropy_curve,
)


def qubit(omega=1.0):
    return qmat.HermitianOperator(np.diag([0.0, omega]))


def test_gibbs_state_of_qubit():
    """Check populations and thermal quantities against closed forms"""
    beta = 0.8
    state = gibbs_state(qubit(), beta)
    excited = math.exp(-beta) / (1 + math.exp(-beta))
    assert np.allclose(np.diag(state.state.entries).real, [1 - excited, excited])
    assert state.thermal_energy == pytest.approx(excited)
    assert state.log_partition == pytest.approx(math.log(1 + math.exp(-beta)))
    assert state.thermal_entropy == pytest.approx(
        qmat.von_neumann_entropy(state.state)
    )


def test_gibbs_state_limits():
    """Check beta = 0 and beta = inf including a degenerate ground space"""
    hamiltonian = qmat.HermitianOperator(np.diag([0.0, 0.0, 1.0]))
    hot = gibbs_state(hamiltonian, 0)
    assert np.allclose(hot.state.entries, np.eye(3) / 3)
    cold = gibbs_state(hamiltonian, math.inf)
    assert np.allclose(np.diag(cold.state.entries).real, [0.5, 0.5, 0])
    assert cold.thermal_entropy == pytest.approx(math.log(2))
    assert cold.thermal_energy == pytest.approx(0)
    assert cold.log_partition == pytest.approx(math.log(2))


def test_gibbs_state_rejects_negative_beta():
    """Check that negative and nan inverse temperatures are domain errors"""
    with pytest.raises(DomainError):
        gibbs_state(qubit(), -1)
    with pytest.raises(DomainError):
        gibbs_state(qubit(), math.nan)


def test_gibbs_state_large_energies_do_not_overflow():
    """Check finite values for large beta and large energies"""
    hamiltonian = qmat.HermitianOperator(np.diag([1e5, 1e5 + 1, 1e5 + 3]))
    state = gibbs_state(hamiltonian, 500)
    assert np.all(np.isfinite(state.populations))
    assert state.populations[0] == pytest.approx(1)
    assert math.isfinite(state.log_partition)
    assert state.log_partition == pytest.approx(-500 * 1e5, rel=1e-12)
    assert math.isinf(gibbs_state(hamiltonian, math.inf).log_partition)


def test_thermal_entropy_curve_is_monotone():
    """Check that entropy decreases from ln d to ln d_g with beta"""
    hamiltonian = qmat.HermitianOperator(np.diag([0.0, 0.5, 1.0, 2.0]))
    betas = [0, 0.1, 0.5, 1, 2, 5, 10, 50]
    values = [thermal_entropy_curve(hamiltonian, beta) for beta in betas]
    assert values[0] == pytest.approx(math.log(4))
    assert all(b < a for a, b in zip(values, values[1:]))
    assert thermal_entropy_curve(hamiltonian, math.inf) == pytest.approx(0)


@pytest.mark.parametrize("beta", [0.2, 1.0, 3.0])
def test_gibbs_finite_differences(beta):
    """Check dS = beta dE and dE/dbeta = -Var(H) by central differences"""
    rng = np.random.default_rng(17)
    hamiltonian = qmat.HermitianOperator(qmat.random_hermitian(4, rng))
    step = 1e-5
    d_energy = (
        thermal_energy(hamiltonian, beta + step)
        - thermal_energy(hamiltonian, beta - step)
    ) / (2 * step)
    d_entropy = (
        thermal_entropy_curve(hamiltonian, beta + step)
        - thermal_entropy_curve(hamiltonian, beta - step)
    ) / (2 * step)
    populations = gibbs_state(hamiltonian, beta).populations
    energies = hamiltonian.spectrum.eigenvalues
    variance = np.dot(populations, energies**2) - np.dot(populations, energies) ** 2
    assert d_energy == pytest.approx(-variance, rel=1e-6)
    assert d_entropy == pytest.approx(beta * d_energy, rel=1e-6)


def test_gibbs_relative_entropy_matches_dense_evaluation():
    """Check the closed form against the eigenbasis evaluation"""
    rng = np.random.default_rng(4)
    hamiltonian = qmat.HermitianOperator(qmat.random_hermitian(3, rng))
    for beta_t, beta_0 in [(0.5, 2.0), (3.0, 0.1), (1.0, 1.0), (0, 4)]:
        dense = qmat.relative_entropy(
            gibbs_state(hamiltonian, beta_t).state,
            gibbs_state(hamiltonian, beta_0).state,
        )
        closed = gibbs_relative_entropy(hamiltonian, beta_t, beta_0)
        assert closed == pytest.approx(dense, abs=1e-10)


def test_gibbs_relative_entropy_with_zero_temperature_reference():
    """Check infinite divergence from a ground reference unless in ground space"""
    hamiltonian = qmat.HermitianOperator(np.diag([0.0, 0.0, 1.0]))
    assert gibbs_relative_entropy(hamiltonian, 1.0, math.inf) == math.inf
    assert gibbs_relative_entropy(hamiltonian, math.inf, math.inf) == 0


def test_solver_matched_case():
    """Check that the solver recovers the temperature of a Gibbs state"""
    hamiltonian = qmat.HermitianOperator(np.diag([0.0, 1.0, 1.5]))
    entropy = thermal_entropy_curve(hamiltonian, 1.3)
    result = solve_effective_temperature(hamiltonian, entropy)
    assert result.case_tag == ENTROPY_MATCHED
    assert result.zeta == 0
    assert result.beta == pytest.approx(1.3, rel=1e-10)
    assert result.temperature == pytest.approx(1 / 1.3, rel=1e-10)


def test_solver_pure_state_nondegenerate_ground():
    """Check beta = inf and zeta = 0 for zero entropy"""
    result = solve_effective_temperature(qubit(), 0.0)
    assert result.beta == math.inf
    assert result.temperature == 0
    assert result.zeta == 0
    assert result.case_tag == ENTROPY_MATCHED


def test_solver_degenerate_ground_deficit():
    """Check the entropy deficit below ln d_g"""
    hamiltonian = qmat.HermitianOperator(np.diag([0.0, 0.0, 1.0]))
    result = solve_effective_temperature(hamiltonian, 0.0)
    assert result.beta == math.inf
    assert result.zeta == pytest.approx(math.log(2))
    assert result.case_tag == GROUND_DEGENERATE


def test_solver_flat_hamiltonian():
    """Check beta = 0 and the deficit below ln dim for a flat Hamiltonian"""
    hamiltonian = qmat.HermitianOperator(2.0 * np.eye(3))
    result = solve_effective_temperature(hamiltonian, 0.4)
    assert result.beta == 0
    assert result.temperature == math.inf
    assert result.zeta == pytest.approx(math.log(3) - 0.4)
    assert result.case_tag == FLAT_HAMILTONIAN


def test_solver_maximal_entropy_gives_infinite_temperature():
    """Check beta = 0 at S = ln dim"""
    result = solve_effective_temperature(qubit(), math.log(2))
    assert result.beta == 0
    assert result.case_tag == ENTROPY_MATCHED


def test_solver_rejects_targets_out_of_range():
    """Check the domain [0, ln dim]"""
    with pytest.raises(DomainError):
        solve_effective_temperature(qubit(), math.log(2) + 1e-3)
    with pytest.raises(DomainError):
        solve_effective_temperature(qubit(), -1e-3)


def test_solver_beta_cap():
    """Check that targets needing beta above the cap give beta = inf"""
    hamiltonian = qubit()
    entropy = thermal_entropy_curve(hamiltonian, 30.0)
    result = solve_effective_temperature(hamiltonian, entropy, beta_cap=10.0)
    assert result.beta == math.inf
    assert result.case_tag == ENTROPY_MATCHED


@pytest.mark.parametrize("beta", [35.0, 40.0, 45.0, 50.0])
def test_solver_keeps_large_finite_beta(beta):
    """Check that a tiny but resolvable qubit entropy gives a finite beta"""
    hamiltonian = qubit()
    entropy = thermal_entropy_curve(hamiltonian, beta)
    assert 0 < entropy < 1e-13
    result = solve_effective_temperature(hamiltonian, entropy)
    assert result.case_tag == ENTROPY_MATCHED
    assert result.zeta == 0
    assert result.beta == pytest.approx(beta, rel=1e-9)


def test_solver_snaps_only_at_degenerate_ground():
    """Check that only a degenerate ground level snaps entropies near ln d_g"""
    assert solve_effective_temperature(qubit(), 0.0).beta == math.inf
    degenerate = qmat.HermitianOperator(np.diag([0.0, 0.0, 1.0]))
    result = solve_effective_temperature(degenerate, math.log(2) * (1 + 1e-15))
    assert result.beta == math.inf
    assert result.case_tag == ENTROPY_MATCHED


@pytest.mark.slow
def test_solver_round_trips():
    """Check beta*(S(beta)) = beta for random Hamiltonians up to dimension 8"""
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        dim = int(rng.integers(2, 9))
        hamiltonian = qmat.HermitianOperator(qmat.random_hermitian(dim, rng))
        beta = float(rng.uniform(0.0, 50.0))
        entropy = thermal_entropy_curve(hamiltonian, beta)
        result = solve_effective_temperature(hamiltonian, entropy)
        assert result.case_tag == ENTROPY_MATCHED
        assert result.beta == pytest.approx(beta, rel=1e-6)
        assert thermal_entropy_curve(hamiltonian, result.beta) == pytest.approx(
            entropy, rel=1e-6, abs=1e-12
        )
    zero = qmat.HermitianOperator(qmat.random_hermitian(5, rng))
    result = solve_effective_temperature(zero, thermal_entropy_curve(zero, 0.0))
    assert result.beta == pytest.approx(0.0, abs=1e-6)
