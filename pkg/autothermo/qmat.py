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


"""Dense Hermitian linear algebra: operators, states, and entropy functionals

All energies are in units with hbar = k_B = 1 and all entropies are in nats.
"""

import functools
import math
import warnings

import numpy as np
import scipy.linalg
from scipy.special import entr

DEFAULT_MAX_DIM = 256
HERMITIAN_ATOL = 1e-12
ASYMMETRY_WARNING_LEVEL = 1e-8
NEGATIVE_EIGENVALUE_CLIP = 1e-12
INVALID_EIGENVALUE_LEVEL = 1e-9
SUPPORT_TOL = 1e-10
# Eigenvalues up to this level are rounding noise of a zero population.
SPECTRUM_NOISE = 1e-13


class DimensionError(ValueError):
    """Operands have incompatible or too large dimensions"""


class InvalidStateError(ValueError):
    """Matrix is not a valid density matrix"""


def as_matrix(operand):
    """Return the plain NumPy matrix behind an operator, state, or array"""
    if isinstance(operand, (HermitianOperator, DensityMatrix)):
        return operand.entries
    matrix = np.asarray(operand, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def default_degeneracy_tol(eigenvalues):
    """Degeneracy tolerance scaled by the spectral range (at least absolute 1e-9)"""
    spread = float(eigenvalues[-1] - eigenvalues[0]) if len(eigenvalues) else 0.0
    return 1e-9 * max(1.0, spread)


class SpectralData:
    """Eigenvalues (ascending), eigenvectors, and ground level of an operator"""

    def __init__(self, eigenvalues, eigenvectors, degeneracy_tol=None):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        if degeneracy_tol is None:
            degeneracy_tol = default_degeneracy_tol(eigenvalues)
        self.degeneracy_tol = degeneracy_tol
        self.ground_energy = float(eigenvalues[0])
        self.ground_degeneracy = int(
            np.count_nonzero(eigenvalues - self.ground_energy <= degeneracy_tol)
        )

    @property
    def spectral_range(self):
        """Difference between the highest and lowest eigenvalue"""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    @property
    def is_flat(self):
        """True when all eigenvalues are within the degeneracy tolerance"""
        return self.ground_degeneracy == len(self.eigenvalues)

    def excitation_gaps(self):
        """Energies above the ground level with the ground space snapped to zero"""
        gaps = self.eigenvalues - self.ground_energy
        gaps[: self.ground_degeneracy] = 0.0
        return gaps


class HermitianOperator:
    """Finite-dimensional Hermitian matrix with a cached spectral decomposition

    The matrix is symmetrized as (M + M^dagger) / 2 at construction. A warning is
    issued when the asymmetry of the input exceeds 1e-8.
    """

    def __init__(self, matrix, degeneracy_tol=None):
        matrix = as_matrix(matrix)
        asymmetry = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
        if asymmetry > ASYMMETRY_WARNING_LEVEL:
            warnings.warn(
                f"Operator asymmetry {asymmetry:.3g} repaired by symmetrization",
                stacklevel=2,
            )
        self.entries = (matrix + matrix.conj().T) / 2
        self.entries.setflags(write=False)
        self._degeneracy_tol = degeneracy_tol

    @property
    def dim(self):
        """Hilbert space dimension"""
        return self.entries.shape[0]

    @functools.cached_property
    def spectrum(self):
        """Spectral data computed once on first access"""
        eigenvalues, eigenvectors = scipy.linalg.eigh(self.entries)
        return SpectralData(eigenvalues, eigenvectors, self._degeneracy_tol)

    def expectation(self, state):
        """Return Tr{rho H} for a density matrix (real part)"""
        return float(np.real(np.sum(self.entries.T * as_matrix(state))))

    def propagator(self, time):
        """Unitary exp(-i H t) from the cached eigendecomposition"""
        spectrum = self.spectrum
        phases = np.exp(-1j * spectrum.eigenvalues * time)
        vectors = spectrum.eigenvectors
        return (vectors * phases) @ vectors.conj().T

    def shifted(self, energy):
        """Return H + energy * identity"""
        return HermitianOperator(
            self.entries + energy * np.eye(self.dim), self._degeneracy_tol
        )

    def __add__(self, other):
        return HermitianOperator(self.entries + as_matrix(other))

    def __mul__(self, factor):
        return HermitianOperator(self.entries * factor)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class DensityMatrix:
    """Unit-trace positive-semidefinite operator

    Validation checks the trace and Hermiticity to 1e-12 per dimension and the
    eigenvalues (not below -1e-12) unless disabled.
    """

    def __init__(self, matrix, validate=True):
        matrix = as_matrix(matrix)
        if validate:
            trace = np.trace(matrix)
            if abs(trace - 1) > HERMITIAN_ATOL * max(1, matrix.shape[0]):
                raise InvalidStateError(f"Trace of state is {trace}, not 1")
            asymmetry = np.max(np.abs(matrix - matrix.conj().T))
            if asymmetry > HERMITIAN_ATOL * max(1, matrix.shape[0]):
                raise InvalidStateError(
                    f"State is not Hermitian (asymmetry {asymmetry:.3g})"
                )
        self.entries = (matrix + matrix.conj().T) / 2
        self.entries.setflags(write=False)
        if validate:
            lowest = self.eigenvalues[0]
            if lowest < -NEGATIVE_EIGENVALUE_CLIP:
                raise InvalidStateError(f"State has negative eigenvalue {lowest:.3g}")

    @classmethod
    def from_vector(cls, vector):
        """Pure state |psi><psi| of a normalized copy of the vector"""
        vector = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("Cannot build a state from a zero vector")
        vector = vector / norm
        return cls(np.outer(vector, vector.conj()))

    @classmethod
    def from_populations(cls, populations, basis=None):
        """State diagonal in *basis* (columns) or the computational basis"""
        populations = np.asarray(populations, dtype=float)
        if basis is None:
            return cls(np.diag(populations).astype(complex))
        return cls((basis * populations) @ basis.conj().T)

    @classmethod
    def maximally_mixed(cls, dim):
        """The state I/dim"""
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self):
        """Hilbert space dimension"""
        return self.entries.shape[0]

    @functools.cached_property
    def eigenvalues(self):
        """Ascending eigenvalues"""
        return scipy.linalg.eigvalsh(self.entries)

    def trace(self):
        """Trace of the state (real part)"""
        return float(np.real(np.trace(self.entries)))

    def purity(self):
        """Tr{rho^2}"""
        return float(np.real(np.sum(self.entries * self.entries.conj())))

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def tensor_product(operands, max_dim=DEFAULT_MAX_DIM):
    """Kronecker product of operands in the given subsystem order

    Returns a DensityMatrix when all operands are states, a HermitianOperator
    when all operands are Hermitian operators, and an array otherwise.
    """
    operands = list(operands)
    if not operands:
        raise DimensionError("At least one operand is needed for a tensor product")
    matrices = [as_matrix(operand) for operand in operands]
    required = math.prod(matrix.shape[0] for matrix in matrices)
    if required > max_dim:
        raise DimensionError(
            f"Tensor product needs dimension {required}, "
            f"which exceeds the cap {max_dim}"
        )
    product = functools.reduce(np.kron, matrices)
    if all(isinstance(operand, DensityMatrix) for operand in operands):
        return DensityMatrix(product)
    if all(isinstance(operand, HermitianOperator) for operand in operands):
        return HermitianOperator(product)
    return product


def _check_dims(dim, dims):
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or math.prod(dims) != dim:
        raise DimensionError(
            f"Subsystem dimensions {dims} do not match total dimension {dim}"
        )
    return dims


def partial_trace(state, dims, keep):
    """Reduced state on subsystems *keep* (indices into *dims*, ascending order)"""
    matrix = as_matrix(state)
    dims = _check_dims(matrix.shape[0], dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"Invalid subsystems to keep: {keep}")
    if len(keep) == len(dims):
        return state if isinstance(state, DensityMatrix) else DensityMatrix(matrix)
    traced = [i for i in range(len(dims)) if i not in keep]
    count = len(dims)
    tensor = matrix.reshape(dims + dims)
    order = keep + traced
    tensor = tensor.transpose(order + [count + i for i in order])
    kept_dim = math.prod(dims[i] for i in keep)
    traced_dim = math.prod(dims[i] for i in traced)
    tensor = tensor.reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    return DensityMatrix(np.einsum("ijkj->ik", tensor))


def _clipped_spectrum(state):
    eigenvalues = state.eigenvalues
    if eigenvalues[0] < -INVALID_EIGENVALUE_LEVEL:
        raise InvalidStateError(f"State has negative eigenvalue {eigenvalues[0]:.3g}")
    populations = np.where(eigenvalues > SPECTRUM_NOISE, eigenvalues, 0.0)
    return populations / np.sum(populations)


def von_neumann_entropy(state):
    """Entropy -Tr{rho ln rho} in nats with 0 ln 0 = 0"""
    if not isinstance(state, DensityMatrix):
        state = DensityMatrix(state)
    return float(np.sum(entr(_clipped_spectrum(state))))


def relative_entropy(rho, sigma, support_tol=SUPPORT_TOL):
    """Relative entropy Tr{rho (ln rho - ln sigma)} in nats

    Returns math.inf when the support of rho is not contained in the support
    of sigma (weight of rho on the numerical kernel of sigma above support_tol).
    """
    if rho.dim != sigma.dim:
        raise DimensionError(f"Dimensions differ: {rho.dim} and {sigma.dim}")
    sigma_values, sigma_vectors = scipy.linalg.eigh(sigma.entries)
    # Weights of rho in the eigenbasis of sigma.
    weights = np.real(
        np.einsum("ki,kl,li->i", sigma_vectors.conj(), rho.entries, sigma_vectors)
    )
    kernel = sigma_values <= support_tol
    if np.sum(weights[kernel]) > support_tol:
        return math.inf
    cross = float(np.sum(weights[~kernel] * np.log(sigma_values[~kernel])))
    value = -von_neumann_entropy(rho) - cross
    return max(value, 0.0)


def _validate_partition(count, parts):
    covered = sorted(i for part in parts for i in part)
    if covered != list(range(count)):
        raise DimensionError(
            f"Partition {parts} does not cover subsystems 0..{count - 1} exactly once"
        )


def mutual_information(state, dims, bipartition):
    """Mutual information S_A + S_B - S_AB for a bipartition of subsystems

    The *bipartition* is a pair of index lists covering all subsystems.
    """
    dims = _check_dims(as_matrix(state).shape[0], dims)
    part_a, part_b = bipartition
    _validate_partition(len(dims), [part_a, part_b])
    if not isinstance(state, DensityMatrix):
        state = DensityMatrix(state)
    entropy_a = von_neumann_entropy(partial_trace(state, dims, part_a))
    entropy_b = von_neumann_entropy(partial_trace(state, dims, part_b))
    return entropy_a + entropy_b - von_neumann_entropy(state)


def total_correlation(state, dims):
    """Sum of single-subsystem entropies minus the global entropy"""
    dims = _check_dims(as_matrix(state).shape[0], dims)
    if not isinstance(state, DensityMatrix):
        state = DensityMatrix(state)
    local = sum(
        von_neumann_entropy(partial_trace(state, dims, [i])) for i in range(len(dims))
    )
    return local - von_neumann_entropy(state)


def evolve(state, hamiltonian, time):
    """Unitary evolution U rho U^dagger with U = exp(-i H t)"""
    if state.dim != hamiltonian.dim:
        raise DimensionError(
            f"State dimension {state.dim} differs from Hamiltonian {hamiltonian.dim}"
        )
    if not math.isfinite(time):
        raise ValueError(f"Evolution time must be finite, not {time}")
    if time == 0:
        return state
    unitary = hamiltonian.propagator(time)
    return DensityMatrix(unitary @ state.entries @ unitary.conj().T)


def random_hermitian(dim, rng, scale=1.0):
    """Random Hermitian matrix (GUE-like) with spectral norm *scale*"""
    matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    matrix = (matrix + matrix.conj().T) / 2
    norm = np.linalg.norm(matrix, ord=2)
    return matrix * (scale / norm) if norm else matrix


def random_unitary(dim, rng):
    """Haar-random unitary from the QR decomposition of a Ginibre matrix"""
    matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(matrix)
    diagonal = np.diagonal(r)
    return q * (diagonal / np.abs(diagonal))


def random_density_matrix(dim, rng, rank=None):
    """Random mixed state W W^dagger / Tr with W of shape dim x rank"""
    rank = dim if rank is None else rank
    matrix = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    product = matrix @ matrix.conj().T
    return DensityMatrix(product / np.real(np.trace(product)))
