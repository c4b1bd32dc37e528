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


"""Passive states, ergotropy, and work extraction with restricted control"""

import itertools
import math

import numpy as np
import scipy.linalg

from . import qmat
from .laws import SecondLawReport
from .operators import local_operator
from .qmat import DensityMatrix, HermitianOperator

MAX_PARAMETERS = 8
MAX_GRID_POINTS = 100000
DEFAULT_BOUND = math.pi


def passive_state(rho, hamiltonian):
    """State with the eigenvalues of *rho* in descending order on ascending levels

    Equal eigenvalues keep their original order (stable sort).
    """
    if rho.dim != hamiltonian.dim:
        raise qmat.DimensionError(
            f"State dimension {rho.dim} differs from Hamiltonian {hamiltonian.dim}"
        )
    populations = scipy.linalg.eigvalsh(rho.entries)
    order = np.argsort(-populations, kind="stable")
    populations = np.clip(populations[order], 0.0, None)
    populations /= np.sum(populations)
    return DensityMatrix.from_populations(
        populations, hamiltonian.spectrum.eigenvectors
    )


def ergotropy(rho, hamiltonian):
    """Maximal energy extractable from *rho* by a unitary"""
    passive = passive_state(rho, hamiltonian)
    value = hamiltonian.expectation(rho) - hamiltonian.expectation(passive)
    return max(value, 0.0)


class ControlFamily:
    """Unitaries U[alpha] = exp(-i sum_j alpha_j G_j) with alpha in a box

    Each generator is a Hermitian operator; *bounds* is a list of
    (low, high) pairs which must contain zero, or a single bound b used
    as (-b, b) for all parameters.
    """

    def __init__(self, name, generators, bounds=DEFAULT_BOUND):
        self.name = name
        self.generators = [
            g if isinstance(g, HermitianOperator) else HermitianOperator(g)
            for g in generators
        ]
        if not self.generators:
            raise ValueError("A control family needs at least one generator")
        dims = {g.dim for g in self.generators}
        if len(dims) != 1:
            raise qmat.DimensionError(f"Generators differ in dimension: {dims}")
        if np.isscalar(bounds):
            bounds = [(-abs(bounds), abs(bounds))] * len(self.generators)
        bounds = [(float(low), float(high)) for low, high in bounds]
        if len(bounds) != len(self.generators):
            raise ValueError(
                f"Got {len(bounds)} bounds for {len(self.generators)} generators"
            )
        for low, high in bounds:
            if not low <= 0 <= high:
                raise ValueError(f"Parameter box [{low}, {high}] must contain 0")
        self.bounds = bounds

    @property
    def parameter_count(self):
        return len(self.generators)

    @property
    def dim(self):
        return self.generators[0].dim

    def generator(self, alpha):
        """Hermitian operator sum_j alpha_j G_j"""
        total = sum(a * g.entries for a, g in zip(alpha, self.generators))
        return HermitianOperator(total)

    def unitary(self, alpha):
        """U[alpha] from the spectral decomposition of the generator"""
        return self.generator(alpha).propagator(1.0)

    def clip(self, alpha):
        return np.array(
            [min(max(a, low), high) for a, (low, high) in zip(alpha, self.bounds)]
        )

    def __repr__(self):
        return f"ControlFamily({self.name!r}, parameters={self.parameter_count})"


def local_control_family(system, subsystem, operators, bound=DEFAULT_BOUND):
    """Control family generated by local operators on one subsystem

    The generators act on the full space of *system*, so the family can be
    used on global states evolving under the total Hamiltonian.
    """
    index = system.index(subsystem)
    dim = system.dims[index]
    generators = [
        system.embed(local_operator(operator, dim), index) for operator in operators
    ]
    return ControlFamily(f"local[{system.labels[index]}]", generators, bound)


def _grid_size(count, points_per_axis, max_points):
    points = points_per_axis
    while points > 2 and points**count > max_points:
        points -= 1
    return points


def restricted_ergotropy(
    rho,
    hamiltonian,
    family,
    points_per_axis=9,
    iterations=60,
    shrink=0.5,
    max_grid_points=MAX_GRID_POINTS,
):
    """Largest energy extracted by unitaries of *family* (value, alpha)

    Coarse grid over the parameter box followed by a coordinate search
    with step shrinking. The result is a lower bound on the restricted
    optimum; alpha = 0 is always a candidate, so the value is never negative.
    """
    if family.dim != rho.dim or hamiltonian.dim != rho.dim:
        raise qmat.DimensionError(
            f"Control family ({family.dim}), state ({rho.dim}), and Hamiltonian "
            f"({hamiltonian.dim}) dimensions must match"
        )
    count = family.parameter_count
    if count > MAX_PARAMETERS:
        raise ValueError(
            f"Control family has {count} parameters, at most {MAX_PARAMETERS} allowed"
        )
    energy = hamiltonian.expectation(rho)
    h_matrix = hamiltonian.entries

    def extracted(alpha):
        unitary = family.unitary(alpha)
        rotated = unitary @ rho.entries @ unitary.conj().T
        return energy - float(np.real(np.sum(h_matrix.T * rotated)))

    best_alpha = np.zeros(count)
    best = 0.0
    points = _grid_size(count, points_per_axis, max_grid_points)
    axes = [np.linspace(low, high, points) for low, high in family.bounds]
    for candidate in itertools.product(*axes):
        value = extracted(candidate)
        if value > best:
            best, best_alpha = value, np.array(candidate)

    steps = np.array([(high - low) / max(points - 1, 1) for low, high in family.bounds])
    for _ in range(iterations):
        improved = False
        for j in range(count):
            for sign in (1.0, -1.0):
                candidate = best_alpha.copy()
                candidate[j] += sign * steps[j]
                candidate = family.clip(candidate)
                value = extracted(candidate)
                if value > best:
                    best, best_alpha = value, candidate
                    improved = True
        if not improved:
            steps *= shrink
    return best, best_alpha


def ergotropy_audit(trajectory, family=None, subsystem=None, stride=1, tolerance=1e-10):
    """Ergotropy (and restricted ergotropy for *family*) along a trajectory

    With *subsystem*, the reduced state and local Hamiltonian are used,
    otherwise the global state and the total Hamiltonian. Rows pass when
    0 <= restricted <= ergotropy <= E - E_g. The time-averaged decay of the
    restricted value is reported as a notice, not as a check.
    """
    system = trajectory.system
    if subsystem is None:
        hamiltonian = system.total_hamiltonian
        label = None
    else:
        index = system.index(subsystem)
        label = system.labels[index]
        hamiltonian = system.subsystems[index].hamiltonian
    ground = hamiltonian.spectrum.ground_energy
    rows = []
    for snapshot in trajectory.snapshots[:: max(int(stride), 1)]:
        if label is None:
            state = qmat.evolve(
                trajectory.initial_state, system.total_hamiltonian, snapshot.t
            )
        else:
            state = snapshot.local[label].state
        energy = hamiltonian.expectation(state)
        value = ergotropy(state, hamiltonian)
        if family is not None:
            restricted, _ = restricted_ergotropy(state, hamiltonian, family)
        else:
            restricted = math.nan
        bounded = -tolerance <= value <= energy - ground + tolerance
        if family is not None:
            bounded = bounded and -tolerance <= restricted <= value + tolerance
        violation = max(
            -value,
            value - (energy - ground),
            0.0 if family is None else max(-restricted, restricted - value),
            0.0,
        )
        rows.append(
            {
                "t": snapshot.t,
                "energy": energy,
                "ergotropy": value,
                "restricted_ergotropy": restricted,
                "residual": violation,
                "passed": bool(bounded),
            }
        )
    notices = []
    if family is not None and len(rows) >= 2:
        half = len(rows) // 2
        early = np.mean([row["restricted_ergotropy"] for row in rows[:half]])
        late = np.mean([row["restricted_ergotropy"] for row in rows[half:]])
        trend = "decreased" if late <= early else "did not decrease"
        notices.append(
            f"Restricted ergotropy ({family.name}) {trend} on average: "
            f"{early:.6g} in the first half, {late:.6g} in the second half"
        )
    return SecondLawReport("ergotropy", label, rows, notices)
