"""Test passive states, ergotropy, and restricted work extraction"""

import math

import numpy as np
import pytest

from autothermo import qmat
from autothermo.dynamics import CompositeSystem, Subsystem, propagate
from autothermo.ergotropy import (
    MAX_PARAMETERS,
    ControlFamily,
    ergotropy,
    ergotropy_audit,
    local_control_family,
    passive_state,
    restricted_ergotropy,
)
from autothermo.operators import local_operator
from autothermo.thermo import gibbs_state

QUBIT = qmat.HermitianOperator(np.diag([0.0, 1.0]))


def test_excited_qubit_has_full_ergotropy():
    """Check that the excited level gives its whole energy"""
    excited = qmat.DensityMatrix.from_populations([0.0, 1.0])
    assert ergotropy(excited, QUBIT) == pytest.approx(1)
    passive = passive_state(excited, QUBIT)
    assert np.allclose(np.diag(passive.entries).real, [1, 0])


def test_gibbs_state_is_passive():
    """Check zero ergotropy for thermal states"""
    rng = np.random.default_rng(9)
    hamiltonian = qmat.HermitianOperator(qmat.random_hermitian(4, rng))
    state = gibbs_state(hamiltonian, 0.7).state
    assert ergotropy(state, hamiltonian) == pytest.approx(0, abs=1e-12)


@pytest.mark.slow
def test_ergotropy_bounds_for_random_instances():
    """Check 0 <= restricted <= ergotropy <= E - E_g and passive-state properties"""
    rng = np.random.default_rng(31)
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        hamiltonian = qmat.HermitianOperator(qmat.random_hermitian(dim, rng))
        rho = qmat.random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
        family = ControlFamily(
            "random", [qmat.random_hermitian(dim, rng) for _ in range(2)], math.pi
        )
        energy = hamiltonian.expectation(rho)
        value = ergotropy(rho, hamiltonian)
        passive = passive_state(rho, hamiltonian)
        assert 0 <= value <= energy - hamiltonian.spectrum.ground_energy + 1e-10
        assert np.allclose(passive.eigenvalues, rho.eigenvalues, atol=1e-10)
        commutator = passive.entries @ hamiltonian.entries
        commutator -= hamiltonian.entries @ passive.entries
        assert np.max(np.abs(commutator)) < 1e-10
        restricted, alpha = restricted_ergotropy(
            rho, hamiltonian, family, points_per_axis=5, iterations=20
        )
        assert 0 <= restricted <= value + 1e-10
        assert len(alpha) == 2


def test_single_qubit_rotations_reach_full_ergotropy():
    """Check that sigma_x and sigma_y rotations are universal for a qubit"""
    state = qmat.DensityMatrix.from_vector([0.6, 0.8])
    family = ControlFamily(
        "qubit", [local_operator("sigma_x", 2), local_operator("sigma_y", 2)]
    )
    value, _ = restricted_ergotropy(state, QUBIT, family)
    assert value == pytest.approx(ergotropy(state, QUBIT), abs=1e-4)


def test_restricted_ergotropy_of_commuting_generator():
    """Check that controls commuting with H extract nothing"""
    state = qmat.DensityMatrix.from_vector([0.6, 0.8])
    family = ControlFamily("phase", [local_operator("sigma_z", 2)])
    value, _ = restricted_ergotropy(state, QUBIT, family)
    assert value == pytest.approx(0, abs=1e-12)


def test_control_family_validation():
    """Check bounds containing zero, dimensions, and the parameter limit"""
    with pytest.raises(ValueError, match="contain 0"):
        ControlFamily("box", [local_operator("sigma_x", 2)], bounds=[(0.5, 1.0)])
    with pytest.raises(qmat.DimensionError):
        ControlFamily("mixed", [np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        ControlFamily("empty", [])
    family = ControlFamily("many", [np.eye(2)] * (MAX_PARAMETERS + 1))
    with pytest.raises(ValueError, match="at most"):
        restricted_ergotropy(qmat.DensityMatrix.maximally_mixed(2), QUBIT, family)


def test_control_family_unitary_and_clip():
    """Check exp(-i alpha sigma_x) and clipping to the box"""
    family = ControlFamily("x", [local_operator("sigma_x", 2)], bounds=1.0)
    unitary = family.unitary([0.3])
    sigma_x = local_operator("sigma_x", 2)
    expected = np.cos(0.3) * np.eye(2) - 1j * np.sin(0.3) * sigma_x
    assert np.allclose(unitary, expected)
    assert np.allclose(family.clip([2.5]), [1.0])


def chain_trajectory():
    subsystems = [Subsystem(label, np.diag([0.0, 1.0])) for label in "AB"]
    sigma_x = local_operator("sigma_x", 2)
    coupling = CompositeSystem(subsystems).coupling_from_factors(
        {0: sigma_x, 1: sigma_x}, 0.3
    )
    system = CompositeSystem(subsystems, [coupling])
    state = system.product_state(
        [qmat.DensityMatrix.from_populations([0.0, 1.0]), gibbs_state(QUBIT, 2).state]
    )
    return propagate(system, state, np.linspace(0, 10, 21))


def test_ergotropy_audit_of_subsystem():
    """Check local ergotropy rows for an initially excited qubit"""
    trajectory = chain_trajectory()
    family = ControlFamily(
        "local[A]", [local_operator("sigma_x", 2), local_operator("sigma_y", 2)]
    )
    report = ergotropy_audit(trajectory, family=family, subsystem="A", stride=5)
    assert report.passed, report.first_violation
    assert len(report.rows) == 5
    assert report.rows[0]["ergotropy"] == pytest.approx(1)
    assert report.notices


def test_ergotropy_audit_of_global_state():
    """Check global ergotropy is conserved under the total Hamiltonian"""
    trajectory = chain_trajectory()
    family = local_control_family(trajectory.system, "A", ["sigma_x", "sigma_y"])
    assert family.dim == 4
    report = ergotropy_audit(trajectory, family=family, stride=10)
    assert report.passed, report.first_violation
    values = [row["ergotropy"] for row in report.rows]
    assert np.allclose(values, values[0], atol=1e-10)


def test_ergotropy_audit_without_family():
    """Check that restricted values are missing without controls"""
    report = ergotropy_audit(chain_trajectory(), subsystem="B")
    assert report.passed
    assert all(math.isnan(row["restricted_ergotropy"]) for row in report.rows)
    assert not report.notices
