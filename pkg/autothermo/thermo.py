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


"""Gibbs states and effective temperatures assigned by entropy matching

A state of a subsystem with Hamiltonian H is assigned the inverse temperature
beta for which the Gibbs state exp(-beta H)/Z has the same von Neumann entropy.
The Gibbs entropy never drops below ln d_g (d_g is the ground degeneracy), so
states with a smaller entropy get beta = inf and the entropy deficit
zeta = ln d_g - S is recorded separately.

All Boltzmann factors use energies shifted by the ground energy and with the
ground level snapped to exactly zero, so that large beta neither overflows nor
loses the ground-space contribution.
"""

import math

import numpy as np
from scipy.optimize import bisect

from .qmat import DensityMatrix

ENTROPY_MATCHED = "EntropyMatched"
GROUND_DEGENERATE = "GroundDegenerate"
FLAT_HAMILTONIAN = "FlatHamiltonian"

# Entropy excess over ln d_g, in units of ln d_g, below which the Gibbs state is
# the ground mixture. No excess is snapped for a nondegenerate ground level.
GROUND_SNAP = 1e-14
TARGET_SLACK = 1e-9
BETA_CAP_SCALE = 1e9
MAX_BISECTIONS = 200


class DomainError(ValueError):
    """Argument outside of the domain of a thermodynamic function"""


def _check_beta(beta):
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise DomainError(f"Inverse temperature must be nonnegative, not {beta}")
    return beta


def _boltzmann(gaps, ground_degeneracy, beta):
    """Populations and shifted log partition function for snapped gaps"""
    if beta == 0:
        weights = np.ones_like(gaps)
    elif math.isinf(beta):
        weights = np.zeros_like(gaps)
        weights[:ground_degeneracy] = 1.0
    else:
        weights = np.exp(-beta * gaps)
    excited = float(np.sum(weights[ground_degeneracy:]))
    log_partition = math.log(ground_degeneracy) + math.log1p(
        excited / ground_degeneracy
    )
    return weights / np.sum(weights), log_partition


def _moments(gaps, ground_degeneracy, beta):
    """Mean excitation energy and entropy of the Gibbs populations"""
    populations, log_partition = _boltzmann(gaps, ground_degeneracy, beta)
    mean_gap = float(np.dot(populations, gaps))
    if math.isinf(beta):
        entropy = math.log(ground_degeneracy)
    else:
        entropy = beta * mean_gap + log_partition
    return mean_gap, entropy, log_partition


class GibbsState:
    """Thermal state of a Hamiltonian at inverse temperature *beta*

    Attributes are *hamiltonian*, *beta*, *state* (DensityMatrix),
    *log_partition* (ln Z of the unshifted energies, infinite for beta = inf
    unless the ground energy is zero), *shifted_log_partition*
    (ln of the sum of exp(-beta (E_k - E_g))), *populations* in the ascending
    eigenbasis, *thermal_energy*, and *thermal_entropy*.
    """

    def __init__(self, hamiltonian, beta):
        beta = _check_beta(beta)
        spectrum = hamiltonian.spectrum
        gaps = spectrum.excitation_gaps()
        degeneracy = spectrum.ground_degeneracy
        populations, shifted = _boltzmann(gaps, degeneracy, beta)
        mean_gap, entropy, _ = _moments(gaps, degeneracy, beta)

        self.hamiltonian = hamiltonian
        self.beta = beta
        self.populations = populations
        self.shifted_log_partition = shifted
        if math.isinf(beta):
            if spectrum.ground_energy == 0:
                self.log_partition = shifted
            else:
                self.log_partition = -math.copysign(math.inf, spectrum.ground_energy)
        else:
            self.log_partition = shifted - beta * spectrum.ground_energy
        self.thermal_energy = spectrum.ground_energy + mean_gap
        self.thermal_entropy = entropy
        self.state = DensityMatrix.from_populations(populations, spectrum.eigenvectors)

    def __repr__(self):
        return f"GibbsState(dim={self.hamiltonian.dim}, beta={self.beta})"


def gibbs_state(hamiltonian, beta):
    """Return the GibbsState exp(-beta H)/Z

    beta = 0 gives I/dim and beta = inf gives the uniform mixture on the
    ground eigenspace. Negative beta raises DomainError.
    """
    return GibbsState(hamiltonian, beta)


def thermal_entropy_curve(hamiltonian, beta):
    """Von Neumann entropy of the Gibbs state at *beta* (nats)"""
    spectrum = hamiltonian.spectrum
    return _moments(
        spectrum.excitation_gaps(), spectrum.ground_degeneracy, _check_beta(beta)
    )[1]


def thermal_energy(hamiltonian, beta):
    """Energy Tr{H w[beta]} of the Gibbs state at *beta*"""
    spectrum = hamiltonian.spectrum
    mean_gap = _moments(
        spectrum.excitation_gaps(), spectrum.ground_degeneracy, _check_beta(beta)
    )[0]
    return spectrum.ground_energy + mean_gap


def gibbs_relative_entropy(hamiltonian, beta_t, beta_0):
    """Relative entropy D(w[beta_t] || w[beta_0]) of two Gibbs states

    Parameters
    ----------
    hamiltonian : HermitianOperator
        Hamiltonian defining both Gibbs states.
    beta_t, beta_0 : float
        Inverse temperatures (nonnegative, inf allowed).

    Returns
    -------
    float
        beta_0 (E^th_t - E_g) - S^th_t + ln Z_shifted(beta_0) in nats, clipped
        at zero. Infinite when beta_0 = inf and w[beta_t] has weight outside
        of the ground space.

    Notes
    -----
    The closed form stays accurate for finite but very large beta_0 where a
    dense evaluation of ln w[beta_0] underflows.
    """
    beta_t = _check_beta(beta_t)
    beta_0 = _check_beta(beta_0)
    spectrum = hamiltonian.spectrum
    gaps = spectrum.excitation_gaps()
    degeneracy = spectrum.ground_degeneracy
    mean_gap, entropy, _ = _moments(gaps, degeneracy, beta_t)
    if math.isinf(beta_0):
        if mean_gap > 0:
            return math.inf
        return max(math.log(degeneracy) - entropy, 0.0)
    _, _, log_partition_0 = _moments(gaps, degeneracy, beta_0)
    return max(beta_0 * mean_gap - entropy + log_partition_0, 0.0)


class EffectiveTemperature:
    """Result of the entropy-matching temperature assignment

    Attributes: *beta* (inf allowed), *temperature* (0 for beta = inf, inf for
    beta = 0), *zeta* (entropy deficit below ln d_g), and *case_tag*.
    """

    def __init__(self, beta, zeta, case_tag):
        self.beta = beta
        self.zeta = zeta
        self.case_tag = case_tag

    @property
    def temperature(self):
        if math.isinf(self.beta):
            return 0.0
        if self.beta == 0:
            return math.inf
        return 1 / self.beta

    def __repr__(self):
        return (
            f"EffectiveTemperature(beta={self.beta}, zeta={self.zeta}, "
            f"case_tag={self.case_tag})"
        )


def solve_effective_temperature(hamiltonian, target_entropy, beta_cap=None):
    """Find beta with Gibbs entropy equal to *target_entropy*

    When the target lies below ln d_g no Gibbs state matches and the mismatch
    is minimized at beta = inf, zeta = ln d_g - target. A flat Hamiltonian gets
    beta = 0 with zeta = ln dim - target.

    The root is bracketed by doubling the upper end from 1 and refined by
    bisection to relative precision in beta. Targets which would need beta
    above *beta_cap* (by default 1e9 over the spectral range) give beta = inf.
    """
    spectrum = hamiltonian.spectrum
    dim = hamiltonian.dim
    max_entropy = math.log(dim)
    target = float(target_entropy)
    if not -TARGET_SLACK <= target <= max_entropy + TARGET_SLACK:
        raise DomainError(
            f"Target entropy {target} outside of [0, ln {dim} = {max_entropy}]"
        )
    target = min(max(target, 0.0), max_entropy)

    if spectrum.is_flat:
        return EffectiveTemperature(0.0, max_entropy - target, FLAT_HAMILTONIAN)

    degeneracy = spectrum.ground_degeneracy
    ground_entropy = math.log(degeneracy)
    snap = GROUND_SNAP * ground_entropy
    if target <= ground_entropy + snap:
        zeta = ground_entropy - target
        if zeta > snap:
            return EffectiveTemperature(math.inf, zeta, GROUND_DEGENERATE)
        return EffectiveTemperature(math.inf, 0.0, ENTROPY_MATCHED)

    gaps = spectrum.excitation_gaps()

    def mismatch(beta):
        return _moments(gaps, degeneracy, beta)[1] - target

    if mismatch(0.0) <= 0:
        return EffectiveTemperature(0.0, 0.0, ENTROPY_MATCHED)

    if beta_cap is None:
        beta_cap = BETA_CAP_SCALE / spectrum.spectral_range
    high = 1.0
    while mismatch(high) > 0:
        if high > beta_cap:
            return EffectiveTemperature(math.inf, 0.0, ENTROPY_MATCHED)
        high *= 2
    beta = bisect(
        mismatch,
        0.0,
        high,
        xtol=1e-300,
        rtol=4 * np.finfo(float).eps,
        maxiter=MAX_BISECTIONS,
        disp=False,
    )
    return EffectiveTemperature(beta, 0.0, ENTROPY_MATCHED)
