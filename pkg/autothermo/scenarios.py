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


"""Scenario presets and construction of scenarios from configurations

A scenario configuration is a nested dictionary (usually loaded from YAML)
with subsystems, couplings, times, audits, and tolerances. The presets are
returned in the same form, so they can be shown, edited, and saved.
"""

import copy
import math
import string

import numpy as np

from . import laws, qmat
from .dynamics import CompositeSystem, Subsystem, check_times
from .ergotropy import DEFAULT_BOUND, MAX_PARAMETERS
from .inputs import ConfigurationError, update_config, update_nested_dict_by_item
from .operators import hamiltonian_matrix, local_operator, matrix_from_spec
from .thermo import gibbs_state

PRESET_NAMES = ("ex1_ground_ground", "ex2_pure_pure", "three_body_chain", "random")

AUDIT_NAMES = (
    "entropy_production_identity",
    "zero_temperature_audit",
    "multipartite_production",
    "thermodynamic_identity_check",
    "ledger",
    "ergotropy",
)
PER_SUBSYSTEM_AUDITS = (
    "entropy_production_identity",
    "zero_temperature_audit",
    "thermodynamic_identity_check",
)
STATE_KINDS = ("eigenstate", "gibbs", "temperature", "pure", "matrix")


def _matrix_config(matrix):
    matrix = np.asarray(matrix)
    config = {"real": np.real(matrix).tolist()}
    if np.any(np.imag(matrix)):
        config["imag"] = np.imag(matrix).tolist()
    return config


def _ex1_ground_ground():
    return {
        "name": "ex1_ground_ground",
        "subsystems": [
            {"label": "A", "dim": 2, "hamiltonian": "qubit(1.0)"},
            {"label": "B", "dim": 2, "hamiltonian": "qubit(1.0)"},
        ],
        "couplings": [{"strength": 0.2, "factors": {"A": "sigma_x", "B": "sigma_x"}}],
        "times": {"start": 0.0, "stop": 20.0, "num": 201},
        "audits": [
            "zero_temperature_audit",
            "multipartite_production",
            "ledger",
        ],
    }


def _ex2_pure_pure():
    return {
        "name": "ex2_pure_pure",
        "subsystems": [
            {
                "label": "A",
                "dim": 2,
                "hamiltonian": "qubit(1.0)",
                "initial_state": {"eigenstate": 1},
            },
            {
                "label": "B",
                "dim": 3,
                "hamiltonian": "oscillator(3, 1.0)",
                "initial_state": {"pure": [1.0, 0.0, 1.0]},
            },
        ],
        "couplings": [
            {
                "strength": 0.15,
                "terms": [
                    {"A": "sigma_plus", "B": "a"},
                    {"A": "sigma_minus", "B": "adag"},
                ],
            }
        ],
        "times": {"start": 0.0, "stop": 20.0, "num": 201},
        "audits": ["zero_temperature_audit", "ledger"],
    }


def _three_body_chain():
    return {
        "name": "three_body_chain",
        "subsystems": [
            {
                "label": label,
                "dim": 2,
                "hamiltonian": "qubit(1.0)",
                "initial_state": {"gibbs": beta},
            }
            for label, beta in zip("ABC", (0.5, 1.0, 2.0))
        ],
        "couplings": [
            {"strength": 0.2, "factors": {"A": "sigma_x", "B": "sigma_x"}},
            {"strength": 0.2, "factors": {"B": "sigma_x", "C": "sigma_x"}},
        ],
        "times": {"start": 0.0, "stop": 20.0, "num": 201},
        "audits": [
            "multipartite_production",
            "ledger",
            {
                "name": "ergotropy",
                "controls": {"subsystem": "A", "operators": ["sigma_x", "sigma_y"]},
                "stride": 10,
            },
        ],
    }


def _random(seed, dims):
    rng = np.random.default_rng(seed)
    dims = [int(dim) for dim in dims]
    labels = string.ascii_uppercase[: len(dims)]
    subsystems = []
    for label, dim in zip(labels, dims):
        hamiltonian = qmat.random_hermitian(dim, rng)
        beta = float(rng.uniform(0.2, 5.0))
        subsystems.append(
            {
                "label": label,
                "dim": dim,
                "hamiltonian": _matrix_config(hamiltonian),
                "initial_state": {"gibbs": beta},
            }
        )
    total_dim = math.prod(dims)
    strength = float(rng.uniform(0.05, 0.5))
    coupling = qmat.random_hermitian(total_dim, rng, scale=strength)
    audits = ["multipartite_production", "ledger"]
    if len(dims) == 2:
        audits.insert(0, "entropy_production_identity")
    return {
        "name": f"random_{seed}",
        "seed": seed,
        "subsystems": subsystems,
        "couplings": [{"matrix": _matrix_config(coupling)}],
        "times": {"start": 0.0, "stop": 10.0, "num": 50},
        "audits": audits,
    }


def preset(name, seed=None, dims=None):
    """Configuration of a named preset scenario

    The random preset needs a *seed* and uses *dims* (default (2, 3)).
    """
    if name == "ex1_ground_ground":
        return _ex1_ground_ground()
    if name == "ex2_pure_pure":
        return _ex2_pure_pure()
    if name == "three_body_chain":
        return _three_body_chain()
    if name == "random":
        return _random(0 if seed is None else int(seed), dims or (2, 3))
    raise ConfigurationError(
        f"Unknown preset '{name}' (available: {', '.join(PRESET_NAMES)})"
    )


class Scenario:
    """Validated scenario ready for propagation

    Attributes are *name*, *system* (CompositeSystem), *initial_factors*
    (per-subsystem states), *initial_state* (their product), *times*,
    *audits* (list of dictionaries with at least name), *tolerances*,
    *sweep* (dictionary or None), and *config* (the source configuration).
    """

    def __init__(self, name, system, initial_factors, times, audits, tolerances):
        self.name = name
        self.system = system
        self.initial_factors = initial_factors
        self.initial_state = system.product_state(initial_factors)
        self.times = times
        self.audits = audits
        self.tolerances = tolerances
        self.sweep = None
        self.config = None

    def __repr__(self):
        return f"Scenario({self.name!r}, {self.system!r})"


def _require(mapping, key, path):
    if not isinstance(mapping, dict) or key not in mapping or mapping[key] is None:
        full_path = f"{path}/{key}" if path else key
        raise ConfigurationError("Required item is missing", path=full_path)
    return mapping[key]


def _number(value, path, kind=float):
    try:
        number = kind(value)
    except (TypeError, ValueError):
        raise ConfigurationError(
            f"Expected a number, got {value!r}", path=path
        ) from None
    if kind is int and number != float(value):
        raise ConfigurationError(f"Expected an integer, got {value!r}", path=path)
    return number


def initial_state_from_spec(spec, hamiltonian, path):
    """Density matrix of a subsystem from an initial state specification"""
    if spec is None or spec == "ground":
        return gibbs_state(hamiltonian, math.inf).state
    if spec in ("mixed", "maximally_mixed"):
        return qmat.DensityMatrix.maximally_mixed(hamiltonian.dim)
    if not isinstance(spec, dict):
        raise ConfigurationError(f"Unknown initial state {spec!r}", path=path)
    kinds = [key for key in spec if key in STATE_KINDS]
    unknown = [key for key in spec if key not in STATE_KINDS]
    if unknown or len(kinds) != 1:
        raise ConfigurationError(
            f"Initial state needs exactly one of {', '.join(STATE_KINDS)}, "
            f"got {', '.join(map(str, spec))}",
            path=path,
        )
    kind = kinds[0]
    value = spec[kind]
    item_path = f"{path}/{kind}"
    try:
        if kind == "eigenstate":
            level = _number(value, item_path, int)
            if not 0 <= level < hamiltonian.dim:
                raise ConfigurationError(
                    f"Level {level} outside of 0..{hamiltonian.dim - 1}", path=item_path
                )
            vector = hamiltonian.spectrum.eigenvectors[:, level]
            return qmat.DensityMatrix.from_vector(vector)
        if kind == "gibbs":
            return gibbs_state(hamiltonian, _number(value, item_path)).state
        if kind == "temperature":
            temperature = _number(value, item_path)
            if temperature < 0:
                raise ConfigurationError("Temperature must be nonnegative", item_path)
            beta = math.inf if temperature == 0 else 1 / temperature
            return gibbs_state(hamiltonian, beta).state
        if kind == "pure":
            if isinstance(value, dict):
                real = np.asarray(value.get("real", 0.0), dtype=float)
                imag = np.asarray(value.get("imag", 0.0), dtype=float)
                vector = real + 1j * imag
            else:
                vector = np.asarray(value, dtype=complex)
            if vector.shape != (hamiltonian.dim,):
                raise ConfigurationError(
                    f"Expected {hamiltonian.dim} amplitudes", path=item_path
                )
            return qmat.DensityMatrix.from_vector(vector)
        return qmat.DensityMatrix(matrix_from_spec(value, hamiltonian.dim))
    except (ValueError, TypeError) as error:
        if isinstance(error, ConfigurationError):
            raise
        raise ConfigurationError(str(error), path=item_path) from error


def _build_subsystems(config):
    items = _require(config, "subsystems", "")
    if not isinstance(items, list) or not items:
        raise ConfigurationError("Expected a non-empty list", path="subsystems")
    subsystems = []
    states = []
    for index, item in enumerate(items):
        path = f"subsystems/{index}"
        if not isinstance(item, dict):
            raise ConfigurationError("Expected a mapping", path=path)
        dim = _number(_require(item, "dim", path), f"{path}/dim", int)
        if dim < 1:
            raise ConfigurationError("Dimension must be positive", path=f"{path}/dim")
        label = str(item.get("label", string.ascii_uppercase[index % 26]))
        spec = _require(item, "hamiltonian", path)
        try:
            hamiltonian = qmat.HermitianOperator(hamiltonian_matrix(spec, dim))
        except ValueError as error:
            raise ConfigurationError(str(error), path=f"{path}/hamiltonian") from error
        subsystems.append(Subsystem(label, hamiltonian))
        states.append(
            initial_state_from_spec(
                item.get("initial_state"), hamiltonian, f"{path}/initial_state"
            )
        )
    return subsystems, states


def _product_term(system, factors, strength, path):
    if not isinstance(factors, dict) or not factors:
        raise ConfigurationError("Expected a mapping of labels to operators", path)
    by_index = {}
    for label, spec in factors.items():
        try:
            index = system.index(label)
        except KeyError as error:
            raise ConfigurationError(
                str(error.args[0]), path=f"{path}/{label}"
            ) from None
        try:
            by_index[index] = local_operator(spec, system.dims[index])
        except ValueError as error:
            raise ConfigurationError(str(error), path=f"{path}/{label}") from error
    return system.coupling_from_factors(by_index, strength)


def _build_couplings(config, system):
    couplings = []
    for index, item in enumerate(config.get("couplings") or []):
        path = f"couplings/{index}"
        if not isinstance(item, dict):
            raise ConfigurationError("Expected a mapping", path=path)
        strength = _number(item.get("strength", 1.0), f"{path}/strength")
        forms = [key for key in ("factors", "terms", "matrix") if key in item]
        if len(forms) != 1:
            raise ConfigurationError(
                "Coupling needs exactly one of factors, terms, matrix", path=path
            )
        if "matrix" in item:
            try:
                matrix = strength * matrix_from_spec(item["matrix"], system.total_dim)
            except ValueError as error:
                raise ConfigurationError(str(error), path=f"{path}/matrix") from error
        elif "factors" in item:
            matrix = _product_term(system, item["factors"], strength, f"{path}/factors")
        else:
            terms = item["terms"]
            if not isinstance(terms, list) or not terms:
                raise ConfigurationError("Expected a list of terms", f"{path}/terms")
            matrix = sum(
                _product_term(system, term, strength, f"{path}/terms/{k}")
                for k, term in enumerate(terms)
            )
        if item.get("hermitian_conjugate", False):
            matrix = matrix + matrix.conj().T
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > 1e-10:
            raise ConfigurationError(
                f"Coupling is not Hermitian (asymmetry {asymmetry:.3g}), "
                "add its conjugate or set hermitian_conjugate",
                path=path,
            )
        couplings.append(matrix)
    return couplings


def _build_times(config):
    spec = _require(config, "times", "")
    if isinstance(spec, list):
        spec = {"values": spec}
    if not isinstance(spec, dict):
        raise ConfigurationError("Expected a mapping", path="times")
    try:
        if "values" in spec:
            times = [float(value) for value in spec["values"]]
        else:
            start = _number(spec.get("start", 0.0), "times/start")
            stop = _number(_require(spec, "stop", "times"), "times/stop")
            num = _number(_require(spec, "num", "times"), "times/num", int)
            times = np.linspace(start, stop, num)
        return check_times(times)
    except (TypeError, ValueError) as error:
        if isinstance(error, ConfigurationError):
            raise
        raise ConfigurationError(str(error), path="times") from error


def _check_controls(controls, subsystem, system, path):
    if not isinstance(controls, dict):
        raise ConfigurationError("Expected a mapping", path=path)
    label = subsystem
    if label is None:
        label = _require(controls, "subsystem", path)
    if str(label) not in system.labels:
        raise ConfigurationError(f"No subsystem '{label}'", path=f"{path}/subsystem")
    operators = controls.get("operators", ["sigma_x", "sigma_y"])
    if not isinstance(operators, list) or not 1 <= len(operators) <= MAX_PARAMETERS:
        raise ConfigurationError(
            f"Expected a list of 1 to {MAX_PARAMETERS} operators",
            path=f"{path}/operators",
        )
    dim = system.dims[system.index(label)]
    for index, operator in enumerate(operators):
        try:
            local_operator(operator, dim)
        except ValueError as error:
            raise ConfigurationError(
                str(error), path=f"{path}/operators/{index}"
            ) from error
    bound = _number(controls.get("bound", DEFAULT_BOUND), f"{path}/bound")
    if not bound > 0:
        raise ConfigurationError("Bound must be positive", path=f"{path}/bound")
    controls["operators"] = operators
    controls["bound"] = bound


def _build_audits(config, system):
    audits = []
    for index, item in enumerate(config.get("audits") or []):
        path = f"audits/{index}"
        audit = {"name": item} if isinstance(item, str) else copy.deepcopy(item)
        if not isinstance(audit, dict) or audit.get("name") not in AUDIT_NAMES:
            raise ConfigurationError(
                f"Unknown audit {item!r} (available: {', '.join(AUDIT_NAMES)})",
                path=path,
            )
        subsystem = audit.get("subsystem")
        if subsystem is not None and str(subsystem) not in system.labels:
            raise ConfigurationError(
                f"No subsystem '{subsystem}'", path=f"{path}/subsystem"
            )
        controls = audit.get("controls")
        if controls is not None:
            _check_controls(controls, subsystem, system, f"{path}/controls")
        if audit["name"] in PER_SUBSYSTEM_AUDITS and subsystem is None:
            for label in system.labels:
                audits.append(dict(audit, subsystem=label, expanded=True))
        else:
            audits.append(audit)
    return audits


def build_scenario(config):
    """Validate a configuration and build the Scenario it describes

    Errors are reported as ConfigurationError naming the offending item.
    """
    if not isinstance(config, dict):
        raise ConfigurationError("Scenario configuration must be a mapping")
    subsystems, states = _build_subsystems(config)
    try:
        system = CompositeSystem(subsystems)
    except ValueError as error:
        raise ConfigurationError(str(error), path="subsystems") from error
    couplings = _build_couplings(config, system)
    system = CompositeSystem(subsystems, couplings)
    try:
        tolerances = laws.resolve_tolerances(config.get("tolerances"))
    except (KeyError, TypeError, ValueError) as error:
        message = error.args[0] if error.args else str(error)
        raise ConfigurationError(str(message), path="tolerances") from error
    scenario = Scenario(
        name=str(config.get("name", "scenario")),
        system=system,
        initial_factors=states,
        times=_build_times(config),
        audits=_build_audits(config, system),
        tolerances=tolerances,
    )
    scenario.sweep = config.get("sweep")
    scenario.config = config
    return scenario


def sweep_config(config, parameter, value):
    """Copy of *config* with the item at *parameter* set to *value*

    Setting one kind of initial state replaces the whole initial state item.
    """
    config = copy.deepcopy(config)
    keys = parameter.split("/")
    if len(keys) >= 2 and keys[-2] == "initial_state":
        keys, value = keys[:-1], {keys[-1]: value}
    update_nested_dict_by_item(config, keys, value)
    return config


def run_scenarios(config, scenario_table, workers=1, reporter=None):
    """Run scenarios based on the configuration and list of scenarios

    Parameters
    ----------
    config : nested dict
        Base configuration for each scenario.
    scenario_table : list of dicts
        Configurations specific for each scenario as a list of dictionaries with
        key/subkey/0 keys and a ``name`` key.
    workers : int
        Number of time points processed concurrently in each run.

    Returns
    -------
    results : list of tuples
        One tuple for each scenario with the run result and the scenario
        configuration.
    """
    # pylint: disable=import-outside-toplevel
    from .simulation import run_simulation

    results = []
    for record in scenario_table:
        scenario_config = update_config(config, record)
        result = run_simulation(scenario_config, workers=workers, reporter=reporter)
        results.append((result, scenario_config))
    return results
