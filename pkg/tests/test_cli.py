import csv
import json
import subprocess
import sys

import yaml

CONFIG = """\
name: pair
subsystems:
- label: A
  dim: 2
  hamiltonian: qubit(1.0)
  initial_state:
    gibbs: 0.5
- label: B
  dim: 2
  hamiltonian: qubit(1.5)
  initial_state:
    temperature: 0.5
couplings:
- strength: 0.2
  factors:
    A: sigma_x
    B: sigma_x
times:
  stop: 3
  num: 7
audits:
- entropy_production_identity
- ledger
"""


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "autothermo", *args],
        capture_output=True,
        universal_newlines=True,
        check=False,
    )


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as file:
        return list(csv.DictReader(file))


def test_run_preset(tmp_path):
    """Check ledger, audit summary, and exit status of a passing run"""
    out = tmp_path / "ex1.csv"
    result = run_cli("run", "--preset", "ex1_ground_ground", "--out", str(out))
    assert result.returncode == 0, result.stderr
    assert "Scenario: ex1_ground_ground" in result.stdout
    assert len(read_csv(out)) == 201
    summary = read_csv(tmp_path / "ex1_audits.csv")
    assert all(row["passed"] == "True" for row in summary)


def test_run_config_file_as_json(tmp_path):
    """Check a run from a configuration file with JSON ledger"""
    config = tmp_path / "config.yml"
    config.write_text(CONFIG)
    out = tmp_path / "pair.json"
    result = run_cli(
        "run", "--config-file", str(config), "--out", str(out), "--format", "json"
    )
    assert result.returncode == 0, result.stderr
    document = json.loads(out.read_text())
    assert document["scenario"] == "pair"
    assert len(document["rows"]) == 7
    assert (tmp_path / "pair_audits.json").exists()


def test_failing_audit_exit_status(tmp_path):
    """Check that a violated inequality gives exit status 1"""
    result = run_cli(
        "run",
        "--preset",
        "ex1_ground_ground",
        "--tol-inequality",
        "-1",
        "--out",
        str(tmp_path / "ex1.csv"),
    )
    assert result.returncode == 1
    assert "violated at" in result.stderr
    assert (tmp_path / "ex1.csv").exists()


def test_explicit_inapplicable_audit_exit_status(tmp_path):
    """Check that an audit refused for the requested subsystem gives exit status 1"""
    config = tmp_path / "config.yml"
    config.write_text(
        CONFIG.replace("    temperature: 0.5\n", "    eigenstate: 0\n").replace(
            "- entropy_production_identity\n",
            "- name: entropy_production_identity\n  subsystem: B\n",
        )
    )
    out = tmp_path / "pair.csv"
    result = run_cli("run", "--config-file", str(config), "--out", str(out))
    assert result.returncode == 1
    assert "entropy_production_identity[B] refused" in result.stderr
    assert "zero_temperature_audit" in result.stderr
    summary = read_csv(tmp_path / "pair_audits.csv")
    assert summary[0]["passed"] == "False"
    assert summary[0]["notices"].startswith("Refused:")


def test_invalid_configuration(tmp_path):
    """Check that configuration errors give exit status 2 and the item"""
    config = tmp_path / "config.yml"
    config.write_text(CONFIG.replace("  dim: 2\n", "", 1))
    result = run_cli("validate", "--config-file", str(config))
    assert result.returncode == 2
    assert "subsystems/0/dim" in result.stderr
    result = run_cli("run", "--config-file", str(tmp_path / "missing.yml"))
    assert result.returncode == 2


def test_validate(tmp_path):
    """Check the description of a valid configuration"""
    config = tmp_path / "config.yml"
    config.write_text(CONFIG)
    result = run_cli("validate", "--config-file", str(config))
    assert result.returncode == 0, result.stderr
    assert "Configuration is valid: pair" in result.stdout
    assert "entropy_production_identity[B]" in result.stdout


def test_presets(tmp_path):
    """Check listing of presets and a shown preset used as configuration"""
    result = run_cli("presets")
    assert result.stdout.split() == [
        "ex1_ground_ground",
        "ex2_pure_pure",
        "three_body_chain",
        "random",
    ]
    result = run_cli("presets", "--show", "random", "--seed", "3")
    config = yaml.safe_load(result.stdout)
    assert config["seed"] == 3
    path = tmp_path / "random.yml"
    path.write_text(result.stdout)
    assert run_cli("validate", "--config-file", str(path)).returncode == 0


def test_sweep_of_temperature(tmp_path):
    """Check per-value ledgers, sweep summary, and limit table"""
    out = tmp_path / "sweep"
    result = run_cli(
        "sweep",
        "--preset",
        "ex1_ground_ground",
        "--parameter",
        "subsystems/1/initial_state/temperature",
        "--values",
        "0.2",
        "0.1",
        "--time",
        "1.4",
        "--out",
        str(out),
    )
    assert result.returncode == 0, result.stderr
    summary = read_csv(out / "sweep_summary.csv")
    assert [row["value"] for row in summary] == ["0.2", "0.1"]
    for row in summary:
        assert (out / row["ledger"]).exists()
    limit = read_csv(out / "limit_table.csv")
    assert [row["temperature"] for row in limit] == ["0.2", "0.1"]
    assert all(row["passed"] == "True" for row in limit)
