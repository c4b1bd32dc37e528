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


"""Single scenario runs with audits and parameter sweeps"""

import re
import types
from concurrent.futures import ThreadPoolExecutor

from . import laws
from .dynamics import propagate
from .ergotropy import (
    DEFAULT_BOUND,
    ControlFamily,
    ergotropy_audit,
    local_control_family,
)
from .inputs import ConfigurationError, get_by_path
from .operators import local_operator
from .outputs import MuteReporter, PrintReporter
from .scenarios import build_scenario, sweep_config

TEMPERATURE_PARAMETER = re.compile(r"^subsystems/(\d+)/initial_state/temperature$")


def run_audit(trajectory, audit, tolerances):
    """Run one audit described by a dictionary with name and options"""
    name = audit["name"]
    subsystem = audit.get("subsystem")
    if name == "entropy_production_identity":
        return laws.entropy_production_identity(trajectory, subsystem, tolerances)
    if name == "zero_temperature_audit":
        return laws.zero_temperature_audit(trajectory, subsystem, tolerances)
    if name == "multipartite_production":
        return laws.multipartite_production(trajectory, tolerances)
    if name == "thermodynamic_identity_check":
        return laws.thermodynamic_identity_check(
            trajectory, subsystem, audit.get("tolerance")
        )
    if name == "ledger":
        return laws.conservation_audit(trajectory, tolerances)
    if name == "ergotropy":
        return ergotropy_audit(
            trajectory,
            family=control_family(trajectory.system, audit),
            subsystem=subsystem,
            stride=int(audit.get("stride", 1)),
        )
    raise ValueError(f"Unknown audit: {name}")


def control_family(system, audit):
    """Control family of an ergotropy audit or None without controls

    With an audit subsystem, generators act on that subsystem only,
    otherwise on the full space.
    """
    controls = audit.get("controls")
    if not controls:
        return None
    operators = controls.get("operators", ["sigma_x", "sigma_y"])
    bound = float(controls.get("bound", DEFAULT_BOUND))
    subsystem = audit.get("subsystem")
    if subsystem is None:
        return local_control_family(system, controls["subsystem"], operators, bound)
    index = system.index(subsystem)
    generators = [local_operator(name, system.dims[index]) for name in operators]
    return ControlFamily(f"local[{system.labels[index]}]", generators, bound)


def run_audits(trajectory, audits, tolerances, reporter):
    """Run audits, reporting those not applicable to the trajectory

    Audits expanded over all subsystems are skipped where they do not apply.
    Audits requested for a subsystem fail with the refusal instead.
    """
    reports = []
    for audit in audits:
        try:
            report = run_audit(trajectory, audit, tolerances)
        except (laws.WrongAuditError, laws.UnsupportedStateError) as error:
            name, subsystem = audit["name"], audit.get("subsystem")
            if audit.get("expanded"):
                notice = f"Skipped: {error}"
                report = laws.SecondLawReport(name, subsystem, notices=[notice])
            else:
                report = laws.SecondLawReport(
                    name, subsystem, notices=[f"Refused: {error}"], refusal=str(error)
                )
        reporter.audit(report)
        reports.append(report)
    return reports


def run_simulation(config, workers=1, verbose=False, reporter=None):
    """Build the scenario of *config*, propagate it, and run its audits

    Returns a namespace with scenario, trajectory, reports, and passed.
    """
    if reporter is None:
        reporter = PrintReporter() if verbose else MuteReporter()
    scenario = build_scenario(config)
    reporter.started(scenario.name, len(scenario.times))
    trajectory = propagate(
        scenario.system, scenario.initial_state, scenario.times, workers=workers
    )
    reports = run_audits(trajectory, scenario.audits, scenario.tolerances, reporter)
    return types.SimpleNamespace(
        scenario=scenario,
        trajectory=trajectory,
        reports=reports,
        passed=all(report.passed for report in reports),
    )


def _check_parameter(config, parameter):
    keys = parameter.split("/")
    if len(keys) >= 2 and keys[-2] == "initial_state":
        get_by_path(config, "/".join(keys[:-2]))
    else:
        get_by_path(config, parameter)


def run_sweep(
    config, parameter=None, values=None, time=None, workers=1, verbose=False
):
    """Run the scenario once for each value of a parameter

    The parameter is a key/subkey/0 path in the configuration, by default
    taken from the ``sweep`` section together with the values. Scenario runs
    are distributed over *workers* threads. When the parameter is the initial
    temperature of a subsystem, the zero-temperature limit table is computed
    at *time* (default: sweep time or the last time point).
    """
    reporter = PrintReporter() if verbose else MuteReporter()
    sweep = config.get("sweep") or {}
    parameter = parameter or sweep.get("parameter")
    if not parameter:
        raise ConfigurationError("Sweep needs a parameter", path="sweep/parameter")
    if values is None:
        values = sweep.get("values")
    if not values:
        raise ConfigurationError("Sweep needs a list of values", path="sweep/values")
    try:
        _check_parameter(config, parameter)
    except ConfigurationError as error:
        raise ConfigurationError(
            f"Parameter '{parameter}' does not name a scenario item",
            path="sweep/parameter",
        ) from error

    match = TEMPERATURE_PARAMETER.match(parameter)
    if match:
        try:
            temperatures = [float(value) for value in values]
        except (TypeError, ValueError):
            temperatures = [0.0]
        decreasing = all(b < a for a, b in zip(temperatures, temperatures[1:]))
        if min(temperatures) <= 0 or not decreasing:
            raise ConfigurationError(
                "Initial temperatures must be positive and strictly decreasing",
                path="sweep/values",
            )

    name = config.get("name", "scenario")
    configs = []
    for value in values:
        entry = sweep_config(config, parameter, value)
        entry["name"] = f"{name}[{parameter}={value}]"
        configs.append(entry)
    # Fail on invalid values before any run.
    for entry in configs:
        build_scenario(entry)

    def run_one(entry):
        return run_simulation(entry, reporter=reporter)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_one, configs))
    else:
        results = [run_one(entry) for entry in configs]

    limit_report = None
    if match:
        scenario = build_scenario(config)
        index = int(match.group(1))
        if time is None:
            time = sweep.get("time", float(scenario.times[-1]))
        try:
            limit_report = laws.zero_temperature_limit_check(
                scenario.system,
                scenario.initial_factors,
                scenario.system.labels[index],
                values,
                float(time),
            )
        except ValueError as error:
            raise ConfigurationError(str(error), path="sweep/values") from error
        reporter.audit(limit_report)
    return types.SimpleNamespace(
        parameter=parameter,
        values=list(values),
        results=results,
        limit_report=limit_report,
        passed=all(result.passed for result in results)
        and (limit_report is None or limit_report.passed),
    )
