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


"""Second-law identities and inequalities audited along trajectories

Each audit returns a SecondLawReport with one row per time point (or per
temperature for the zero-temperature limit table). A row is a dictionary of
named quantities plus ``residual`` (size of the worst deviation in the row)
and ``passed``.
"""

import math

import numpy as np

from . import thermo
from .dynamics import product_distance, propagate

DEFAULT_TOLERANCES = {
    "identity": 1e-8,
    "inequality": 1e-10,
    "nonnegativity": 1e-9,
    "conservation": 1e-10,
    "entropy_conservation": 1e-9,
}


class UnsupportedStateError(RuntimeError):
    """Initial state outside of what an audit can handle (e.g. correlated)"""


class WrongAuditError(RuntimeError):
    """Audit does not apply to the initial temperature of the subsystem"""


def resolve_tolerances(overrides=None):
    """Default tolerances updated by *overrides* (unknown names are an error)"""
    tolerances = dict(DEFAULT_TOLERANCES)
    if overrides:
        unknown = set(overrides) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise KeyError(f"Unknown tolerances: {', '.join(sorted(unknown))}")
        tolerances.update({key: float(value) for key, value in overrides.items()})
    return tolerances


class SecondLawReport:
    """Rows of an audit with the overall verdict

    An audit which refused to run has no rows and a *refusal* message and fails.
    """

    def __init__(self, kind, subsystem=None, rows=None, notices=None, refusal=None):
        self.kind = kind
        self.subsystem = subsystem
        self.rows = list(rows) if rows else []
        self.notices = list(notices) if notices else []
        self.refusal = refusal

    @property
    def passed(self):
        if self.refusal is not None:
            return False
        return all(row["passed"] for row in self.rows)

    @property
    def max_residual(self):
        residuals = [row["residual"] for row in self.rows]
        residuals = [value for value in residuals if not math.isnan(value)]
        return max(residuals) if residuals else 0.0

    @property
    def first_violation(self):
        for row in self.rows:
            if not row["passed"]:
                return row
        return None

    @property
    def name(self):
        if self.subsystem is None:
            return self.kind
        return f"{self.kind}[{self.subsystem}]"

    def __repr__(self):
        return (
            f"SecondLawReport({self.name}, passed={self.passed}, "
            f"rows={len(self.rows)})"
        )


def _require_product(trajectory, audit):
    distance = product_distance(trajectory.initial_state, trajectory.system.dims)
    if distance > 1e-10:
        raise UnsupportedStateError(
            f"{audit} needs an uncorrelated initial state, but the initial state "
            f"differs from the product of its marginals by {distance:.3g} "
            "(time-reversed trajectories start correlated)"
        )


def entropy_production_identity(trajectory, subsystem, tolerances=None):
    """Audit T0 dS_A + dEth_B - T0 dzeta_B = T0 I_AB + T0 D_B for two subsystems

    T0 is the initial effective temperature of *subsystem* (B) and A is the
    other subsystem. D_B is the relative entropy of the Gibbs state at the
    current effective temperature of B to the initial one.
    """
    tolerances = resolve_tolerances(tolerances)
    system = trajectory.system
    if len(system.subsystems) != 2:
        raise UnsupportedStateError(
            f"Bipartite identity needs exactly two subsystems, "
            f"not {len(system.subsystems)} (use multipartite_production)"
        )
    index = system.index(subsystem)
    other = system.labels[1 - index]
    label = system.labels[index]
    beta_0 = trajectory.initial.local[label].beta
    if math.isinf(beta_0):
        raise WrongAuditError(
            f"Subsystem '{label}' starts at zero effective temperature, "
            "use zero_temperature_audit"
        )
    if beta_0 == 0:
        raise WrongAuditError(
            f"Subsystem '{label}' starts at infinite effective temperature"
        )
    _require_product(trajectory, "entropy_production_identity")
    temperature_0 = 1 / beta_0
    limit = tolerances["identity"] * system.energy_scale
    start = trajectory.initial
    rows = []
    for snapshot in trajectory.snapshots:
        record_a = snapshot.local[other]
        record_b = snapshot.local[label]
        lhs = (
            temperature_0 * (record_a.entropy - start.local[other].entropy)
            + (record_b.thermal_energy - start.local[label].thermal_energy)
            - temperature_0 * (record_b.zeta - start.local[label].zeta)
        )
        rhs_mutual = temperature_0 * snapshot.correlation
        rhs_drive = temperature_0 * record_b.relative_entropy
        residual = abs(lhs - rhs_mutual - rhs_drive)
        sigma = rhs_mutual + rhs_drive
        nonnegative = (
            snapshot.correlation >= -tolerances["nonnegativity"]
            and record_b.relative_entropy >= -tolerances["nonnegativity"]
        )
        rows.append(
            {
                "t": snapshot.t,
                "lhs": lhs,
                "rhs_mutual": rhs_mutual,
                "rhs_drive": rhs_drive,
                "identity_residual": residual,
                "sigma": sigma,
                "heat": record_b.heat,
                "residual": residual,
                "passed": bool(residual <= limit and nonnegative),
            }
        )
    return SecondLawReport("entropy_production_identity", label, rows)


def zero_temperature_audit(trajectory, subsystem, tolerances=None):
    """Audit Q_B <= 0 and W_B >= dE_rest + dE_int for B starting at T = 0"""
    tolerances = resolve_tolerances(tolerances)
    system = trajectory.system
    label = system.labels[system.index(subsystem)]
    beta_0 = trajectory.initial.local[label].beta
    if not math.isinf(beta_0):
        temperature = 1 / beta_0 if beta_0 else math.inf
        raise WrongAuditError(
            f"Subsystem '{label}' starts at temperature {temperature}, "
            "use entropy_production_identity"
        )
    slack = tolerances["inequality"]
    start = trajectory.initial
    others = [other for other in system.labels if other != label]
    rows = []
    for snapshot in trajectory.snapshots:
        record = snapshot.local[label]
        rest_energy_change = sum(
            snapshot.local[other].energy - start.local[other].energy
            for other in others
        )
        interaction_change = snapshot.interaction_energy - start.interaction_energy
        work_margin = record.work - rest_energy_change - interaction_change
        rows.append(
            {
                "t": snapshot.t,
                "heat": record.heat,
                "work": record.work,
                "rest_energy_change": rest_energy_change,
                "interaction_energy_change": interaction_change,
                "work_margin": work_margin,
                "residual": max(record.heat, -work_margin, 0.0),
                "passed": bool(record.heat <= slack and work_margin >= -slack),
            }
        )
    return SecondLawReport("zero_temperature_audit", label, rows)


def multipartite_production(trajectory, tolerances=None):
    """Audit correlation buildup and its Clausius-like form for N subsystems

    The total correlation C = sum_i S_i - S_total is nonnegative. When all
    initial effective temperatures are finite, the derived quantity
    sum_i [beta_i(0) dEth_i - dzeta_i] equals C + sum_i D_i and is reported
    as well.
    """
    tolerances = resolve_tolerances(tolerances)
    system = trajectory.system
    _require_product(trajectory, "multipartite_production")
    start = trajectory.initial
    finite = all(not math.isinf(start.local[label].beta) for label in system.labels)
    notices = []
    if not finite:
        notices.append(
            "Clausius form skipped: a subsystem starts at zero effective temperature"
        )
    floor = -tolerances["nonnegativity"]
    limit = tolerances["identity"] * system.energy_scale
    rows = []
    for snapshot in trajectory.snapshots:
        drive = sum(snapshot.local[label].relative_entropy for label in system.labels)
        if finite:
            clausius = sum(
                start.local[label].beta
                * (
                    snapshot.local[label].thermal_energy
                    - start.local[label].thermal_energy
                )
                - (snapshot.local[label].zeta - start.local[label].zeta)
                for label in system.labels
            )
            clausius_residual = abs(clausius - snapshot.correlation - drive)
        else:
            clausius = math.nan
            clausius_residual = math.nan
        passed = snapshot.correlation >= floor
        if finite:
            passed = passed and clausius >= floor and clausius_residual <= limit
        rows.append(
            {
                "t": snapshot.t,
                "total_correlation": snapshot.correlation,
                "clausius": clausius,
                "drive": drive,
                "clausius_residual": clausius_residual,
                "residual": max(
                    -snapshot.correlation,
                    -clausius if finite else 0.0,
                    clausius_residual if finite else 0.0,
                    0.0,
                ),
                "passed": bool(passed),
            }
        )
    return SecondLawReport("multipartite_production", None, rows, notices)


def thermodynamic_identity_check(trajectory, subsystem, tolerance=None):
    """Central-difference residual of dEth_B = T_B dSth_B along the trajectory

    For each interior time the residual is
    |Eth(t+) - Eth(t-) - T(t) (Sth(t+) - Sth(t-))| / (t+ - t-)
    with Sth = S + zeta. It scales as h^2 for a uniform step h.
    Points where B or a neighbor has zero or infinite effective temperature
    are skipped with a notice. Without *tolerance* the report is informational.
    """
    system = trajectory.system
    label = system.labels[system.index(subsystem)]
    energy = trajectory.local_column(label, "thermal_energy")
    entropy = trajectory.local_column(label, "thermal_entropy")
    beta = trajectory.local_column(label, "beta")
    times = trajectory.times
    usable = np.isfinite(beta) & (beta > 0)
    rows = []
    skipped = 0
    for k in range(1, len(times) - 1):
        if not (usable[k - 1] and usable[k] and usable[k + 1]):
            skipped += 1
            continue
        span = times[k + 1] - times[k - 1]
        residual = abs(
            energy[k + 1] - energy[k - 1] - (entropy[k + 1] - entropy[k - 1]) / beta[k]
        )
        residual /= span
        rows.append(
            {
                "t": float(times[k]),
                "temperature": 1 / beta[k],
                "step": span / 2,
                "residual": residual,
                "passed": bool(tolerance is None or residual <= tolerance),
            }
        )
    notices = []
    if skipped:
        notices.append(
            f"{skipped} time points skipped (zero or infinite effective temperature)"
        )
    return SecondLawReport("thermodynamic_identity_check", label, rows, notices)


def conservation_audit(trajectory, tolerances=None):
    """Audit energy conservation, global entropy invariance, and dE_i = -Q_i - W_i"""
    tolerances = resolve_tolerances(tolerances)
    system = trajectory.system
    scale = system.energy_scale
    energy_limit = tolerances["conservation"] * scale
    entropy_limit = tolerances["entropy_conservation"]
    start = trajectory.initial
    rows = []
    for snapshot in trajectory.snapshots:
        energy_drift = abs(snapshot.total_energy - start.total_energy)
        entropy_drift = abs(snapshot.total_entropy - start.total_entropy)
        split = max(
            abs(
                snapshot.local[label].energy
                - start.local[label].energy
                + snapshot.local[label].heat
                + snapshot.local[label].work
            )
            for label in system.labels
        )
        rows.append(
            {
                "t": snapshot.t,
                "energy_drift": energy_drift,
                "entropy_drift": entropy_drift,
                "split_residual": split,
                "residual": max(energy_drift / scale, entropy_drift, split / scale),
                "passed": bool(
                    energy_drift <= energy_limit
                    and entropy_drift <= entropy_limit
                    and split <= energy_limit
                ),
            }
        )
    return SecondLawReport("ledger", None, rows)


def zero_temperature_limit_check(
    system, initial_factors, subsystem, temperatures, time, workers=1
):
    """Table of T D(w[beta_B(t)] || w[1/T]) against Eth_B(t) - E_g as T -> 0

    Subsystem B is prepared in the Gibbs state at each temperature while the
    other subsystems keep their *initial_factors*. A run with B in its ground
    mixture provides the limit Eth_B(t). T D uses the closed Gibbs form with the
    nominal preparation temperature. The check passes when the deviation does
    not grow as the temperature decreases.
    """
    temperatures = [float(value) for value in temperatures]
    if not temperatures or any(value <= 0 for value in temperatures):
        raise ValueError("Temperatures must be positive")
    if any(b >= a for a, b in zip(temperatures, temperatures[1:])):
        raise ValueError(f"Temperatures must strictly decrease, got {temperatures}")
    index = system.index(subsystem)
    label = system.labels[index]
    hamiltonian = system.subsystems[index].hamiltonian
    spectrum = hamiltonian.spectrum
    times = [0.0, float(time)] if time > 0 else [0.0]

    def run(state_b):
        factors = list(initial_factors)
        factors[index] = state_b
        trajectory = propagate(system, system.product_state(factors), times, workers)
        return trajectory.initial.local[label], trajectory.snapshots[-1].local[label]

    _, reference = run(thermo.gibbs_state(hamiltonian, math.inf).state)
    limit = reference.thermal_energy - spectrum.ground_energy
    bound_scale = math.log(spectrum.ground_degeneracy)
    rows = []
    previous = math.inf
    for temperature in temperatures:
        beta_0 = 1 / temperature
        start, record = run(thermo.gibbs_state(hamiltonian, beta_0).state)
        scaled_divergence = temperature * thermo.gibbs_relative_entropy(
            hamiltonian, record.beta, beta_0
        )
        deviation = abs(scaled_divergence - limit)
        zeta_term = abs(temperature * (record.zeta - start.zeta))
        zeta_bound = temperature * bound_scale
        passed = deviation <= previous + 1e-12 and zeta_term <= zeta_bound + 1e-12
        previous = deviation
        rows.append(
            {
                "temperature": temperature,
                "t": float(time),
                "scaled_divergence": scaled_divergence,
                "limit_thermal_energy": reference.thermal_energy,
                "ground_energy": spectrum.ground_energy,
                "deviation": deviation,
                "zeta_term": zeta_term,
                "zeta_bound": zeta_bound,
                "residual": deviation,
                "passed": bool(passed),
            }
        )
    return SecondLawReport("zero_temperature_limit", label, rows)

