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


"""Command line interface: run, sweep, presets, and validate"""

import argparse
import re
import sys
from pathlib import Path

import yaml

from .inputs import (
    ConfigurationError,
    load_configuration,
    text_to_value,
    update_config,
)
from .outputs import (
    audit_summary_path,
    describe_violation,
    format_number,
    print_run_summary,
    write_audit_summary,
    write_ledger,
    write_table,
)
from .scenarios import PRESET_NAMES, build_scenario, preset
from .simulation import run_simulation, run_sweep

EXIT_SUCCESS = 0
EXIT_AUDIT_FAILURE = 1
EXIT_CONFIGURATION_ERROR = 2

SWEEP_SUMMARY_COLUMNS = [
    "index",
    "parameter",
    "value",
    "scenario",
    "ledger",
    "passed",
    "final_sigma",
    "final_E_int",
]
LIMIT_TABLE_COLUMNS = [
    "temperature",
    "t",
    "scaled_divergence",
    "limit_thermal_energy",
    "ground_energy",
    "deviation",
    "zeta_term",
    "zeta_bound",
    "passed",
]


class CustomHelpFormatter(argparse.RawTextHelpFormatter):
    """Help formatter to have uppercase, not lowercase usage"""

    def add_usage(self, usage, actions, groups, prefix=None):
        """Add usage text"""
        if prefix is None:
            prefix = "Usage: "
        return super().add_usage(usage, actions, groups, prefix)


def get_executable_name():
    """Get name of the executable

    Returns "python -m module" if executed with python -m in command line.
    This is a workaround for missing argparse support for "python -m module".
    """
    if globals().get("__spec__") is None:
        return None
    name = __spec__.name.partition(".")[0]
    return f"python -m {name}"


def file_stem(name):
    """Scenario name usable as a file name"""
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", str(name)).strip("_") or "scenario"


def add_source_arguments(parser):
    """Scenario source: configuration file or preset, plus overrides"""
    source = parser.add_argument_group("Scenario (one is required)")
    exclusive = source.add_mutually_exclusive_group(required=True)
    exclusive.add_argument(
        "--config-file", type=str, help="Path to configuration file (YAML, JSON, CSV)"
    )
    exclusive.add_argument("--preset", choices=PRESET_NAMES, help="Preset scenario")
    source.add_argument(
        "--seed", type=int, help="Seed of the random preset (stored in the scenario)"
    )
    source.add_argument(
        "--dims", type=int, nargs="+", help="Subsystem dimensions of the random preset"
    )
    tolerances = parser.add_argument_group("Tolerances (optional)")
    tolerances.add_argument(
        "--tol-identity", type=float, help="Tolerance of identity residuals"
    )
    tolerances.add_argument(
        "--tol-inequality", type=float, help="Slack of zero-temperature inequalities"
    )


def add_output_arguments(parser, out_help):
    output = parser.add_argument_group("Output (optional)")
    output.add_argument("--out", type=str, help=out_help)
    output.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="Ledger file format"
    )
    output.add_argument(
        "--workers", type=int, default=1, help="Number of concurrent workers"
    )
    output.add_argument(
        "-v", "--verbose", action="store_true", help="Print progress messages"
    )


def get_config(args):
    """Configuration from the command line source with overrides applied"""
    if args.preset:
        config = preset(args.preset, seed=args.seed, dims=args.dims)
    else:
        config = load_configuration(args.config_file)
        if args.seed is not None:
            config["seed"] = args.seed
    record = {}
    if args.tol_identity is not None:
        record["tolerances/identity"] = args.tol_identity
    if args.tol_inequality is not None:
        record["tolerances/inequality"] = args.tol_inequality
    if record:
        config = update_config(config, record)
    return config


def report_failures(reports):
    for report in reports:
        if not report.passed:
            print(f"Audit failed: {describe_violation(report)}", file=sys.stderr)


def command_run(args):
    config = get_config(args)
    result = run_simulation(config, workers=args.workers, verbose=args.verbose)
    name = result.scenario.name
    out = Path(args.out) if args.out else Path(f"{file_stem(name)}.{args.format}")
    write_ledger(out, result.trajectory, name, file_format=args.format)
    summary = audit_summary_path(out, args.format)
    write_audit_summary(summary, result.reports, args.format, scenario=name)
    print_run_summary(name, result.trajectory, result.reports)
    print(f"Ledger: {out}\nAudit summary: {summary}")
    if not result.passed:
        report_failures(result.reports)
        return EXIT_AUDIT_FAILURE
    return EXIT_SUCCESS


def command_sweep(args):
    config = get_config(args)
    values = [text_to_value(value) for value in args.values] if args.values else None
    sweep = run_sweep(
        config,
        parameter=args.parameter,
        values=values,
        time=args.time,
        workers=args.workers,
        verbose=args.verbose,
    )
    name = config.get("name", "scenario")
    out_dir = Path(args.out) if args.out else Path(f"sweep_{file_stem(name)}")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for index, (value, result) in enumerate(zip(sweep.values, sweep.results)):
        ledger = out_dir / f"{file_stem(name)}_{index:03d}.{args.format}"
        scenario = result.scenario.name
        write_ledger(ledger, result.trajectory, scenario, file_format=args.format)
        write_audit_summary(
            audit_summary_path(ledger, args.format),
            result.reports,
            args.format,
            scenario=scenario,
        )
        final = result.trajectory.snapshots[-1]
        rows.append(
            {
                "index": index,
                "parameter": sweep.parameter,
                "value": value,
                "scenario": scenario,
                "ledger": ledger.name,
                "passed": result.passed,
                "final_sigma": final.sigma,
                "final_E_int": final.interaction_energy,
            }
        )
        print(
            f"{sweep.parameter} = {value}: "
            f"{'pass' if result.passed else 'FAIL'} ({ledger})"
        )
    write_table(out_dir / "sweep_summary.csv", rows, SWEEP_SUMMARY_COLUMNS)
    if sweep.limit_report is not None:
        write_table(
            out_dir / "limit_table.csv", sweep.limit_report.rows, LIMIT_TABLE_COLUMNS
        )
        print("Zero-temperature limit (T, deviation):")
        for row in sweep.limit_report.rows:
            print(
                f"\t{format_number(row['temperature'])}\t"
                f"{format_number(row['deviation'])}"
            )
    if not sweep.passed:
        for result in sweep.results:
            report_failures(result.reports)
        if sweep.limit_report is not None and not sweep.limit_report.passed:
            report_failures([sweep.limit_report])
        return EXIT_AUDIT_FAILURE
    return EXIT_SUCCESS


def command_presets(args):
    if args.show:
        config = preset(args.show, seed=args.seed, dims=args.dims)
        print(yaml.safe_dump(config, sort_keys=False), end="")
    else:
        for name in PRESET_NAMES:
            print(name)
    return EXIT_SUCCESS


def command_validate(args):
    config = get_config(args)
    scenario = build_scenario(config)
    system = scenario.system
    audits = ", ".join(
        audit["name"]
        + (f"[{audit['subsystem']}]" if audit.get("subsystem") else "")
        for audit in scenario.audits
    )
    print(
        f"Configuration is valid: {scenario.name}\n"
        f"\tsubsystems: {', '.join(f'{s.label} ({s.dim})' for s in system.subsystems)}"
        f"\n\tcouplings: {len(system.couplings)}"
        f"\n\ttime points: {len(scenario.times)}"
        f"\n\taudits: {audits or 'none'}"
    )
    return EXIT_SUCCESS


def build_parser():
    """Parser with the run, sweep, presets, and validate subcommands"""
    parser = argparse.ArgumentParser(
        description="Thermodynamic ledgers of autonomous quantum systems",
        formatter_class=CustomHelpFormatter,
        prog=get_executable_name(),
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    run = subparsers.add_parser(
        "run",
        help="Propagate a scenario, write its ledger, and run its audits",
        formatter_class=CustomHelpFormatter,
    )
    add_source_arguments(run)
    add_output_arguments(run, "Ledger file (default: <scenario>.<format>)")
    run.set_defaults(function=command_run)

    sweep = subparsers.add_parser(
        "sweep",
        help="Run a scenario for each value of a parameter",
        formatter_class=CustomHelpFormatter,
    )
    add_source_arguments(sweep)
    add_output_arguments(sweep, "Output directory (default: sweep_<scenario>)")
    parameters = sweep.add_argument_group("Sweep (optional with a sweep section)")
    parameters.add_argument(
        "--parameter",
        type=str,
        help="Configuration item as key/subkey/0 path,\n"
        "e.g. subsystems/1/initial_state/temperature",
    )
    parameters.add_argument("--values", nargs="+", help="Values of the parameter")
    parameters.add_argument(
        "--time", type=float, help="Time of the zero-temperature limit table"
    )
    sweep.set_defaults(function=command_sweep)

    presets = subparsers.add_parser(
        "presets", help="List presets or show one as configuration"
    )
    presets.add_argument("--show", choices=PRESET_NAMES, help="Preset to show")
    presets.add_argument("--seed", type=int, help="Seed of the random preset")
    presets.add_argument("--dims", type=int, nargs="+", help="Random preset dims")
    presets.set_defaults(function=command_presets)

    validate = subparsers.add_parser(
        "validate",
        help="Check a scenario configuration without running it",
        formatter_class=CustomHelpFormatter,
    )
    add_source_arguments(validate)
    validate.set_defaults(function=command_validate)
    return parser


def main(argv=None):
    """Process command line parameters and return the exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.function(args)
    except ConfigurationError as error:
        print(f"Configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIGURATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
