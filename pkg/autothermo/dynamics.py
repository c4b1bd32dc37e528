# Thermodynamic ledgers for autonomous quantum systems
# Copyright (C) 2024 the autothermo authors

# This program is free software; you can redistribute it and/or modify it under
# the terms of the GNU General Public License as published by the Free Software
# Foundation; either version 2 of the License, or (at your option) any later
# version.

# This program is distributed in the hope that it will be useful, but WITHOUT
# ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or
# FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License for more
# details.

# You should have received a copy of the GNU General Public License along with
# this program; if not, see https://www.gnu.org/licenses/gpl-2.0.html


"""Composite systems, unitary trajectories, and per-time thermodynamic records

Heat and work of subsystem i are measured from the first time point:
Q_i = -(Eth_i(t) - Eth_i(0)) and W_i = -((E_i - Eth_i)(t) - (E_i - Eth_i)(0)),
so that E_i(t) - E_i(0) = -Q_i - W_i.
"""

import functools
import math
import types
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import qmat
from .qmat import DensityMatrix, HermitianOperator
from .thermo import (
    gibbs_relative_entropy,
    gibbs_state,
    solve_effective_temperature,
    thermal_energy,
)

PRODUCT_STATE_TOL = 1e-10
COUPLING_HERMITIAN_TOL = 1e-10


class Subsystem:
    """Labeled subsystem with its local Hamiltonian"""

    def __init__(self, label, hamiltonian):
        if not isinstance(hamiltonian, HermitianOperator):
            hamiltonian = HermitianOperator(hamiltonian)
        self.label = str(label)
        self.hamiltonian = hamiltonian

    @property
    def dim(self):
        return self.hamiltonian.dim

    def __repr__(self):
        return f"Subsystem({self.label!r}, dim={self.dim})"


class CompositeSystem:
    """Ordered subsystems plus coupling operators acting on the full space"""

    def __init__(self, subsystems, couplings=(), max_dim=qmat.DEFAULT_MAX_DIM):
        self.subsystems = list(subsystems)
        if not self.subsystems:
            raise ValueError("A composite system needs at least one subsystem")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValueError(f"Subsystem labels must be unique, got {labels}")
        self.max_dim = max_dim
        total_dim = math.prod(self.dims)
        if total_dim > max_dim:
            raise qmat.DimensionError(
                f"Composite system needs dimension {total_dim}, "
                f"which exceeds the cap {max_dim}"
            )
        self.couplings = []
        for index, coupling in enumerate(couplings):
            matrix = qmat.as_matrix(coupling)
            if matrix.shape[0] != total_dim:
                raise qmat.DimensionError(
                    f"Coupling {index} has dimension {matrix.shape[0]}, "
                    f"expected {total_dim}"
                )
            asymmetry = np.max(np.abs(matrix - matrix.conj().T))
            if asymmetry > COUPLING_HERMITIAN_TOL:
                raise ValueError(
                    f"Coupling {index} is not Hermitian (asymmetry {asymmetry:.3g})"
                )
            self.couplings.append(HermitianOperator(matrix))

    @property
    def labels(self):
        return [subsystem.label for subsystem in self.subsystems]

    @property
    def dims(self):
        return [subsystem.dim for subsystem in self.subsystems]

    @property
    def total_dim(self):
        return math.prod(self.dims)

    def index(self, label):
        """Position of the subsystem with *label*"""
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(
                f"No subsystem '{label}' (available: {', '.join(self.labels)})"
            ) from None

    def embed(self, operator, index):
        """Full-space matrix I x ... x operator x ... x I"""
        factors = [np.eye(dim, dtype=complex) for dim in self.dims]
        factors[index] = qmat.as_matrix(operator)
        return qmat.tensor_product(factors, max_dim=self.max_dim)

    def coupling_from_factors(self, factors, strength=1.0):
        """Full-space product operator from a mapping of subsystem index to factor

        The result is not necessarily Hermitian.
        """
        matrices = [np.eye(dim, dtype=complex) for dim in self.dims]
        for index, factor in factors.items():
            matrices[index] = qmat.as_matrix(factor)
        return strength * qmat.tensor_product(matrices, max_dim=self.max_dim)

    @functools.cached_property
    def total_hamiltonian(self):
        """Sum of embedded local Hamiltonians and couplings"""
        total = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for index, subsystem in enumerate(self.subsystems):
            total += self.embed(subsystem.hamiltonian, index)
        for coupling in self.couplings:
            total += coupling.entries
        return HermitianOperator(total)

    @property
    def energy_scale(self):
        """max(1, spectral norm of the total Hamiltonian)"""
        eigenvalues = self.total_hamiltonian.spectrum.eigenvalues
        return max(1.0, float(np.max(np.abs(eigenvalues))))

    def product_state(self, states):
        """Global state from per-subsystem states in subsystem order"""
        states = list(states)
        if len(states) != len(self.subsystems):
            raise ValueError(
                f"Expected {len(self.subsystems)} subsystem states, got {len(states)}"
            )
        for subsystem, state in zip(self.subsystems, states):
            if state.dim != subsystem.dim:
                raise qmat.DimensionError(
                    f"State of '{subsystem.label}' has dimension {state.dim}, "
                    f"expected {subsystem.dim}"
                )
        return qmat.tensor_product(states, max_dim=self.max_dim)

    def __repr__(self):
        return f"CompositeSystem({self.labels}, couplings={len(self.couplings)})"


def build_total_hamiltonian(system):
    """Return the total Hamiltonian sum_i H_i (embedded) + sum_k V_k"""
    return system.total_hamiltonian


def interaction_energy(state, system):
    """Return sum_k Tr{V_k rho}"""
    if state.dim != system.total_dim:
        raise qmat.DimensionError(
            f"State dimension {state.dim} differs from system {system.total_dim}"
        )
    return float(sum(coupling.expectation(state) for coupling in system.couplings))


def time_reversed(state):
    """Complex conjugate of a state written in the product basis"""
    return DensityMatrix(np.conj(state.entries))


def marginals(state, dims):
    """Single-subsystem reduced states"""
    return [qmat.partial_trace(state, dims, [i]) for i in range(len(dims))]


def product_distance(state, dims):
    """Max-norm distance between a state and the product of its marginals"""
    product = functools.reduce(np.kron, [m.entries for m in marginals(state, dims)])
    return float(np.max(np.abs(state.entries - product)))


def is_product_state(state, dims, tol=PRODUCT_STATE_TOL):
    return product_distance(state, dims) <= tol


def local_record(subsystem, reduced_state):
    """Energy, entropy, and effective temperature of one reduced state"""
    hamiltonian = subsystem.hamiltonian
    entropy = qmat.von_neumann_entropy(reduced_state)
    temperature = solve_effective_temperature(hamiltonian, entropy)
    return types.SimpleNamespace(
        label=subsystem.label,
        state=reduced_state,
        energy=hamiltonian.expectation(reduced_state),
        entropy=entropy,
        beta=temperature.beta,
        temperature=temperature.temperature,
        zeta=temperature.zeta,
        case_tag=temperature.case_tag,
        thermal_energy=thermal_energy(hamiltonian, temperature.beta),
        thermal_entropy=entropy + temperature.zeta,
    )


class ThermoSnapshot:
    """Thermodynamic record of the global state at time *t*

    The *local* mapping holds one namespace per subsystem label with energy,
    entropy, beta, temperature, zeta, case_tag, thermal_energy,
    thermal_entropy, heat, work, relative_entropy, and the reduced state.
    Global attributes are interaction_energy, total_entropy, correlation
    (mutual information for two subsystems, total correlation otherwise),
    sigma, and identity_residual.
    """

    def __init__(self, t, local, interaction_energy, total_entropy, correlation):
        self.t = t
        self.local = local
        self.interaction_energy = interaction_energy
        self.total_entropy = total_entropy
        self.correlation = correlation
        self.sigma = 0.0
        self.identity_residual = 0.0

    @property
    def total_energy(self):
        return (
            sum(record.energy for record in self.local.values())
            + self.interaction_energy
        )

    def __repr__(self):
        return f"ThermoSnapshot(t={self.t})"


def _measure(system, state, t):
    """Snapshot without the quantities referring to the initial time"""
    dims = system.dims
    local = {}
    for index, subsystem in enumerate(system.subsystems):
        reduced = qmat.partial_trace(state, dims, [index])
        local[subsystem.label] = local_record(subsystem, reduced)
    total_entropy = qmat.von_neumann_entropy(state)
    correlation = sum(record.entropy for record in local.values()) - total_entropy
    return ThermoSnapshot(
        t=t,
        local=local,
        interaction_energy=interaction_energy(state, system),
        total_entropy=total_entropy,
        correlation=correlation,
    )


def _complete(snapshot, initial, system):
    """Fill heat, work, relative entropies, and production using the t = 0 record"""
    clausius = 0.0
    drive = 0.0
    for subsystem in system.subsystems:
        record = snapshot.local[subsystem.label]
        start = initial.local[subsystem.label]
        record.heat = -(record.thermal_energy - start.thermal_energy)
        record.work = -(
            (record.energy - record.thermal_energy)
            - (start.energy - start.thermal_energy)
        )
        hamiltonian = subsystem.hamiltonian
        record.relative_entropy = qmat.relative_entropy(
            gibbs_state(hamiltonian, record.beta).state,
            gibbs_state(hamiltonian, start.beta).state,
        )
        if math.isinf(record.relative_entropy) and not math.isinf(start.beta):
            # Finite-temperature Gibbs states have full support; populations
            # below the support tolerance only look like a kernel.
            record.relative_entropy = gibbs_relative_entropy(
                hamiltonian, record.beta, start.beta
            )
        drive += record.relative_entropy
        if math.isinf(start.beta):
            clausius = math.nan
        else:
            clausius += start.beta * (
                record.thermal_energy - start.thermal_energy
            ) - (record.zeta - start.zeta)
    buildup = snapshot.correlation - initial.correlation
    snapshot.sigma = buildup + drive
    if math.isnan(clausius) or math.isinf(drive):
        snapshot.identity_residual = math.nan
    else:
        snapshot.identity_residual = abs(clausius - snapshot.sigma)
    return snapshot


class Trajectory:
    """Snapshots of a unitary evolution at the given times"""

    def __init__(self, system, initial_state, times, snapshots):
        self.system = system
        self.initial_state = initial_state
        self.times = times
        self.snapshots = snapshots

    @property
    def labels(self):
        return self.system.labels

    @property
    def initial(self):
        return self.snapshots[0]

    def local_column(self, label, name):
        """Values of a per-subsystem quantity across the trajectory"""
        return np.array([getattr(s.local[label], name) for s in self.snapshots])

    def is_product(self, tol=PRODUCT_STATE_TOL):
        return is_product_state(self.initial_state, self.system.dims, tol)

    def __len__(self):
        return len(self.snapshots)

    def __repr__(self):
        return f"Trajectory({self.system!r}, points={len(self)})"


def check_times(times):
    """Return times as an array, checking they start at 0 and increase strictly"""
    times = np.asarray(times, dtype=float).ravel()
    if not times.size:
        raise ValueError("At least one time point is needed")
    if not np.all(np.isfinite(times)):
        raise ValueError("Times must be finite")
    if times[0] != 0:
        raise ValueError(f"Times must start at 0, not {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("Times must be strictly increasing")
    return times


def propagate(system, initial_state, times, workers=1):
    """Evolve *initial_state* under the total Hamiltonian and record snapshots

    Each time point uses a fresh propagator exp(-i H t) from the cached
    spectral decomposition. With *workers* above 1, time points are
    processed by a thread pool.
    """
    times = check_times(times)
    if not isinstance(initial_state, DensityMatrix):
        initial_state = DensityMatrix(initial_state)
    if initial_state.dim != system.total_dim:
        raise qmat.DimensionError(
            f"Initial state dimension {initial_state.dim} differs from "
            f"system dimension {system.total_dim}"
        )
    hamiltonian = system.total_hamiltonian

    def snapshot_at(t):
        state = qmat.evolve(initial_state, hamiltonian, float(t))
        return _measure(system, state, float(t))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            snapshots = list(executor.map(snapshot_at, times))
    else:
        snapshots = [snapshot_at(t) for t in times]
    initial = snapshots[0]
    for snapshot in snapshots:
        _complete(snapshot, initial, system)
    return Trajectory(system, initial_state, times, snapshots)
