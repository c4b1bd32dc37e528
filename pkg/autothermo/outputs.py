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


"""Outputs: ledgers, audit summaries, reporters, and text summaries"""

import csv
import json
import math
from pathlib import Path

import numpy as np

LOCAL_COLUMNS = (
    ("E", "energy"),
    ("S", "entropy"),
    ("beta", "beta"),
    ("T", "temperature"),
    ("zeta", "zeta"),
    ("Eth", "thermal_energy"),
    ("Q", "heat"),
    ("W", "work"),
)

AUDIT_SUMMARY_COLUMNS = [
    "audit",
    "subsystem",
    "passed",
    "max_residual",
    "rows",
    "first_violation_t",
    "notices",
]


class PrintReporter:
    """Reporter which prints progress messages"""

    # pylint: disable=missing-function-docstring
    def __init__(self, file=None):
        self.file = file

    def started(self, name, points):
        print(f"Running scenario {name} ({points} time points)", file=self.file)

    def audit(self, report):
        verdict = "passed" if report.passed else "FAILED"
        print(
            f"Audit {report.name} {verdict} (max residual {report.max_residual:.3g})",
            file=self.file,
        )
        for notice in report.notices:
            print(f"  {notice}", file=self.file)

    def written(self, path):
        print(f"Written {path}", file=self.file)


class MuteReporter:
    """Reporter which is completely silent"""

    # pylint: disable=missing-function-docstring
    def started(self, name, points):
        pass

    def audit(self, report):
        pass

    def written(self, path):
        pass


def format_number(value):
    """Text for a ledger cell: floats with 17 significant digits, inf and nan"""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def correlation_column(labels):
    """Name of the correlation column: I_AB for two subsystems"""
    return "I_AB" if len(labels) == 2 else "total_correlation"


def ledger_columns(labels):
    """Ledger header for subsystems with the given labels"""
    columns = ["scenario", "t"]
    for label in labels:
        columns.extend(f"{short}_{label}" for short, _ in LOCAL_COLUMNS)
    columns.extend(["E_int", "S_total", correlation_column(labels)])
    columns.extend(f"D_{label}" for label in labels)
    columns.extend(["sigma", "identity_residual"])
    return columns


def ledger_rows(trajectory, scenario):
    """One dictionary per snapshot keyed by :func:`ledger_columns`"""
    labels = trajectory.labels
    correlation = correlation_column(labels)
    rows = []
    for snapshot in trajectory.snapshots:
        row = {"scenario": scenario, "t": snapshot.t}
        for label in labels:
            record = snapshot.local[label]
            for short, name in LOCAL_COLUMNS:
                row[f"{short}_{label}"] = getattr(record, name)
        row["E_int"] = snapshot.interaction_energy
        row["S_total"] = snapshot.total_entropy
        row[correlation] = snapshot.correlation
        for label in labels:
            row[f"D_{label}"] = snapshot.local[label].relative_entropy
        row["sigma"] = snapshot.sigma
        row["identity_residual"] = snapshot.identity_residual
        rows.append(row)
    return rows


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return format_number(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(filename, rows, columns, file_format="csv", name=None):
    """Write rows (dictionaries) as CSV or as JSON with columns and rows"""
    filename = Path(filename)
    if file_format == "csv":
        with open(filename, "w", newline="", encoding="utf-8") as file:
            writer = csv.DictWriter(
                file,
                columns,
                delimiter=",",
                quotechar='"',
                lineterminator="\n",
                quoting=csv.QUOTE_MINIMAL,
                extrasaction="ignore",
            )
            writer.writeheader()
            for row in rows:
                writer.writerow(
                    {column: format_number(row.get(column)) for column in columns}
                )
    elif file_format == "json":
        document = {
            "scenario": name,
            "columns": list(columns),
            "rows": [
                {column: _json_value(row.get(column)) for column in columns}
                for row in rows
            ],
        }
        with open(filename, "w", encoding="utf-8", newline="\n") as file:
            json.dump(document, file, indent=1, allow_nan=False)
            file.write("\n")
    else:
        raise ValueError(f"Unknown output format: {file_format}")
    return filename


def write_ledger(filename, trajectory, scenario, file_format="csv"):
    """Write the ledger of a trajectory, one row per time point"""
    return write_table(
        filename,
        ledger_rows(trajectory, scenario),
        ledger_columns(trajectory.labels),
        file_format=file_format,
        name=scenario,
    )


def audit_summary_path(ledger_path, file_format="csv"):
    """Path of the audit summary written next to a ledger"""
    ledger_path = Path(ledger_path)
    return ledger_path.with_name(f"{ledger_path.stem}_audits.{file_format}")


def audit_summary_rows(reports):
    rows = []
    for report in reports:
        violation = report.first_violation
        rows.append(
            {
                "audit": report.kind,
                "subsystem": report.subsystem,
                "passed": report.passed,
                "max_residual": report.max_residual,
                "rows": len(report.rows),
                "first_violation_t": violation.get("t") if violation else None,
                "notices": "; ".join(report.notices),
            }
        )
    return rows


def write_audit_summary(filename, reports, file_format="csv", scenario=None):
    """Write per-audit verdicts and maximal residuals"""
    return write_table(
        filename,
        audit_summary_rows(reports),
        AUDIT_SUMMARY_COLUMNS,
        file_format=file_format,
        name=scenario,
    )


def describe_violation(report):
    """One-line description of the first failing row of a report"""
    if report.refusal is not None:
        return f"{report.name} refused: {report.refusal}"
    row = report.first_violation
    if row is None:
        return f"{report.name}: no violation"
    values = ", ".join(
        f"{key}={format_number(value)}" for key, value in row.items() if key != "passed"
    )
    return f"{report.name} violated at {values}"


def print_run_summary(name, trajectory, reports, file=None):
    """Print scenario parameters, audit results, and heat and work per subsystem"""
    system = trajectory.system
    print(f"Scenario: {name}", file=file)
    print("----------------------------------------------------------", file=file)
    for subsystem in system.subsystems:
        spectrum = subsystem.hamiltonian.spectrum
        start = trajectory.initial.local[subsystem.label]
        print(
            f"{subsystem.label}: dim {subsystem.dim}, ground energy "
            f"{spectrum.ground_energy:.6g} (degeneracy {spectrum.ground_degeneracy}), "
            f"initial T {start.temperature:.6g}, initial S {start.entropy:.6g}",
            file=file,
        )
    print(
        f"Couplings: {len(system.couplings)}, "
        f"times: {trajectory.times[0]:g} to {trajectory.times[-1]:g} "
        f"({len(trajectory.times)} points)",
        file=file,
    )
    final = trajectory.snapshots[-1]
    print(f"At t = {final.t:g}:", file=file)
    for label in trajectory.labels:
        record = final.local[label]
        delta = record.energy - trajectory.initial.local[label].energy
        print(
            f"\t{label}: dE = {delta:.6g}, heat Q = {record.heat:.6g}, "
            f"work W = {record.work:.6g}, T = {record.temperature:.6g}",
            file=file,
        )
    print(
        f"\tE_int = {final.interaction_energy:.6g}, "
        f"{correlation_column(trajectory.labels)} = {final.correlation:.6g}, "
        f"sigma = {final.sigma:.6g}",
        file=file,
    )
    print("Audits:", file=file)
    for report in reports:
        verdict = "pass" if report.passed else "FAIL"
        print(
            f"\t{report.name}: {verdict} (max residual {report.max_residual:.3g})",
            file=file,
        )
        for notice in report.notices:
            print(f"\t\t{notice}", file=file)


def trajectory_to_dataframe(trajectory, scenario=None):
    """Return the ledger of a trajectory as a pandas DataFrame"""
    import pandas as pd  # pylint: disable=import-outside-toplevel

    return pd.DataFrame(
        ledger_rows(trajectory, scenario), columns=ledger_columns(trajectory.labels)
    )


def report_to_dataframe(report):
    """Return the rows of an audit report as a pandas DataFrame"""
    import pandas as pd  # pylint: disable=import-outside-toplevel

    return pd.DataFrame(report.rows)
