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


"""Local operators and Hamiltonians from textual specifications

Qubit level 0 is the ground level and level 1 the excited level, so
sigma_plus = |1><0| raises the energy of diag(0, omega).
"""

import re

import numpy as np

__all__ = [
    "local_operator",
    "hamiltonian_matrix",
    "matrix_from_spec",
    "annihilation",
    "OPERATOR_NAMES",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()

_SPEC_PATTERN = re.compile(r"^\s*([A-Za-z_]+)\s*\((.*)\)\s*$")


def annihilation(levels):
    """Truncated oscillator lowering operator a with a|n> = sqrt(n)|n-1>"""
    return np.diag(np.sqrt(np.arange(1, levels)), k=1).astype(complex)


def _qubit_only(matrix, name):
    def build(dim):
        if dim != 2:
            raise ValueError(f"Operator '{name}' needs dimension 2, not {dim}")
        return matrix.copy()

    return build


_OPERATORS = {
    "identity": lambda dim: np.eye(dim, dtype=complex),
    "sigma_x": _qubit_only(SIGMA_X, "sigma_x"),
    "sigma_y": _qubit_only(SIGMA_Y, "sigma_y"),
    "sigma_z": _qubit_only(SIGMA_Z, "sigma_z"),
    "sigma_plus": _qubit_only(SIGMA_PLUS, "sigma_plus"),
    "sigma_minus": _qubit_only(SIGMA_MINUS, "sigma_minus"),
    "a": annihilation,
    "adag": lambda dim: annihilation(dim).conj().T,
    "number": lambda dim: np.diag(np.arange(dim)).astype(complex),
    "x": lambda dim: (annihilation(dim) + annihilation(dim).conj().T) / np.sqrt(2),
    "p": lambda dim: 1j * (annihilation(dim).conj().T - annihilation(dim)) / np.sqrt(2),
}

OPERATOR_NAMES = tuple(_OPERATORS)


def matrix_from_spec(spec, dim=None):
    """Complex matrix from a nested list or a mapping with real and imag parts"""
    if isinstance(spec, dict):
        unknown = set(spec) - {"real", "imag"}
        if unknown:
            raise ValueError(f"Unknown matrix keys: {', '.join(sorted(unknown))}")
        if "real" not in spec and "imag" not in spec:
            raise ValueError("Matrix needs a 'real' or an 'imag' part")
        real = np.asarray(spec.get("real", 0.0), dtype=float)
        imag = np.asarray(spec.get("imag", 0.0), dtype=float)
        try:
            matrix = real + 1j * imag
        except ValueError as error:
            raise ValueError("Real and imaginary parts differ in shape") from error
    else:
        matrix = np.asarray(spec, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Matrix must be square, not of shape {matrix.shape}")
    if dim is not None and matrix.shape[0] != dim:
        raise ValueError(f"Matrix has dimension {matrix.shape[0]}, expected {dim}")
    return matrix


def local_operator(spec, dim):
    """Operator on a subsystem of dimension *dim* from a name or explicit matrix"""
    if isinstance(spec, str):
        try:
            build = _OPERATORS[spec.strip()]
        except KeyError:
            raise ValueError(
                f"Unknown operator '{spec}' (use one of: {', '.join(OPERATOR_NAMES)})"
            ) from None
        return build(dim)
    return matrix_from_spec(spec, dim)


def _parse_arguments(text):
    if not text.strip():
        return []
    try:
        return [float(item) for item in text.split(",")]
    except ValueError as error:
        raise ValueError(f"Arguments must be numbers: '{text}'") from error


def hamiltonian_matrix(spec, dim):
    """Local Hamiltonian matrix from a specification

    Accepted forms are ``qubit(omega)`` giving diag(0, omega),
    ``oscillator(levels, omega)`` giving omega diag(0, ..., levels - 1),
    ``diagonal(e0, e1, ...)``, and an explicit matrix.
    """
    if not isinstance(spec, str):
        return matrix_from_spec(spec, dim)
    match = _SPEC_PATTERN.match(spec)
    if not match:
        raise ValueError(f"Cannot parse Hamiltonian '{spec}'")
    name, args = match.group(1), _parse_arguments(match.group(2))
    if name == "qubit":
        if len(args) != 1:
            raise ValueError("qubit(omega) takes exactly one argument")
        energies = [0.0, args[0]]
    elif name == "oscillator":
        if len(args) != 2 or args[0] != int(args[0]) or args[0] < 1:
            raise ValueError("oscillator(levels, omega) needs integer levels and omega")
        energies = args[1] * np.arange(int(args[0]))
    elif name == "diagonal":
        if not args:
            raise ValueError("diagonal(e0, e1, ...) needs at least one energy")
        energies = args
    else:
        raise ValueError(f"Unknown Hamiltonian type '{name}'")
    if len(energies) != dim:
        raise ValueError(
            f"Hamiltonian '{spec}' has dimension {len(energies)}, expected {dim}"
        )
    return np.diag(np.asarray(energies, dtype=float)).astype(complex)
