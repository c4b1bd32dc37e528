"""Test presets, scenario construction, and scenario tables"""

import math

import numpy as np
import pytest

from autothermo import qmat
from autothermo.inputs import (
    ConfigurationError,
    load_configuration,
    load_scenario_table,
    update_config,
)
from autothermo.scenarios import (
    PRESET_NAMES,
    build_scenario,
    initial_state_from_spec,
    preset,
    run_scenarios,
    sweep_config,
)

QUTRIT = qmat.HermitianOperator(np.diag([0.0, 1.0, 2.0]))


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_build(name):
    """Check that all presets give valid scenarios"""
    scenario = build_scenario(preset(name, seed=1))
    assert scenario.times[0] == 0
    assert scenario.initial_state.trace() == pytest.approx(1)
    assert scenario.audits


def test_ex1_preset():
    """Check the two-qubit ground-state preset"""
    scenario = build_scenario(preset("ex1_ground_ground"))
    assert scenario.system.labels == ["A", "B"]
    assert scenario.system.dims == [2, 2]
    assert len(scenario.times) == 201
    assert scenario.initial_state.entries[0, 0] == pytest.approx(1)


def test_random_preset_depends_on_seed():
    """Check reproducibility and dimensions of the random preset"""
    assert preset("random", seed=5) == preset("random", seed=5)
    assert preset("random", seed=5) != preset("random", seed=6)
    scenario = build_scenario(preset("random", seed=5, dims=(2, 2, 2)))
    assert scenario.system.dims == [2, 2, 2]
    names = [audit["name"] for audit in scenario.audits]
    assert "entropy_production_identity" not in names
    two = build_scenario(preset("random", seed=5))
    assert [a["subsystem"] for a in two.audits[:2]] == ["A", "B"]


def test_unknown_preset():
    """Check that unknown presets are configuration errors"""
    with pytest.raises(ConfigurationError, match="available"):
        preset("ex3")


@pytest.mark.parametrize(
    "spec,populations",
    [
        (None, [1, 0, 0]),
        ("ground", [1, 0, 0]),
        ("mixed", [1 / 3, 1 / 3, 1 / 3]),
        ({"eigenstate": 2}, [0, 0, 1]),
        ({"temperature": 0}, [1, 0, 0]),
        ({"gibbs": 0}, [1 / 3, 1 / 3, 1 / 3]),
        ({"pure": [0, 1, 0]}, [0, 1, 0]),
        ({"matrix": [[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0]]}, [0.5, 0.5, 0]),
    ],
)
def test_initial_states(spec, populations):
    """Check all kinds of initial state specifications"""
    state = initial_state_from_spec(spec, QUTRIT, "subsystems/0/initial_state")
    assert np.allclose(np.diag(state.entries).real, populations)


def test_temperature_and_gibbs_initial_states_agree():
    """Check that temperature T is gibbs 1/T"""
    by_temperature = initial_state_from_spec({"temperature": 0.5}, QUTRIT, "x")
    by_beta = initial_state_from_spec({"gibbs": 2.0}, QUTRIT, "x")
    assert np.allclose(by_temperature.entries, by_beta.entries)


@pytest.mark.parametrize(
    "spec",
    [
        {"eigenstate": 3},
        {"temperature": -1},
        {"gibbs": -1},
        {"pure": [1, 0]},
        {"gibbs": 1, "pure": [1, 0, 0]},
        {"thermal": 1},
        "excited",
        {"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 0]]},
    ],
)
def test_invalid_initial_states(spec):
    """Check that invalid initial states name the item"""
    with pytest.raises(ConfigurationError, match="subsystems/0/initial_state"):
        initial_state_from_spec(spec, QUTRIT, "subsystems/0/initial_state")


def test_scenario_from_file(datadir):
    """Check a qubit and oscillator scenario with a conjugated coupling term"""
    scenario = build_scenario(load_configuration(datadir / "config.yml"))
    assert scenario.name == "qubit_oscillator"
    assert scenario.system.dims == [2, 3]
    coupling = scenario.system.couplings[0].entries
    assert np.allclose(coupling, coupling.conj().T)
    assert np.max(np.abs(coupling)) == pytest.approx(0.1 * math.sqrt(2))
    assert [audit.get("subsystem") for audit in scenario.audits] == [
        "A",
        "B",
        None,
        None,
    ]


def test_audit_expansion_is_tagged(datadir):
    """Check that only audits expanded over subsystems are tagged"""
    config = load_configuration(datadir / "config.yml")
    config["audits"].append({"name": "zero_temperature_audit", "subsystem": "B"})
    audits = build_scenario(config).audits
    assert [audit.get("expanded", False) for audit in audits] == [
        True,
        True,
        False,
        False,
        False,
    ]


def test_control_defaults(datadir):
    """Check that controls get the default operators and bound"""
    config = load_configuration(datadir / "config.yml")
    config["audits"] = [{"name": "ergotropy", "subsystem": "A", "controls": {}}]
    (audit,) = build_scenario(config).audits
    assert audit["controls"]["operators"] == ["sigma_x", "sigma_y"]
    assert audit["controls"]["bound"] == math.pi


@pytest.mark.parametrize(
    "record,path",
    [
        ({"subsystems/0/dim": None}, "subsystems/0/dim"),
        ({"subsystems/0/dim": 3}, "subsystems/0/hamiltonian"),
        ({"subsystems/1/hamiltonian": "spin(1)"}, "subsystems/1/hamiltonian"),
        ({"couplings/0/terms/0/C": "a"}, "couplings/0/terms/0/C"),
        ({"couplings/0/hermitian_conjugate": False}, "couplings/0"),
        ({"couplings/0/matrix": [[1]]}, "couplings/0"),
        ({"times/start": 1.0}, "times"),
        ({"times/num": "many"}, "times/num"),
        ({"audits/0": "fourth_law"}, "audits/0"),
        ({"audits/0": {"name": "ergotropy", "subsystem": "C"}}, "audits/0/subsystem"),
        (
            {"audits/0": {"name": "ergotropy", "controls": {"operators": ["x"]}}},
            "audits/0/controls/subsystem",
        ),
        (
            {
                "audits/0": {
                    "name": "ergotropy",
                    "controls": {"subsystem": "B", "operators": ["sigma_x"]},
                }
            },
            "audits/0/controls/operators/0",
        ),
        ({"tolerances/identiti": 1e-3}, "tolerances"),
    ],
)
def test_configuration_errors_name_the_item(datadir, record, path):
    """Check that invalid items are reported with their path"""
    config = update_config(load_configuration(datadir / "config.yml"), record)
    with pytest.raises(ConfigurationError) as error:
        build_scenario(config)
    assert error.value.path == path


def test_missing_subsystems():
    """Check that subsystems are required"""
    with pytest.raises(ConfigurationError) as error:
        build_scenario({"times": [0, 1]})
    assert error.value.path == "subsystems"


def test_times_as_list():
    """Check explicit time points"""
    config = preset("ex1_ground_ground")
    config["times"] = [0, 0.5, 2]
    assert list(build_scenario(config).times) == [0, 0.5, 2]


def test_coupling_matrix_form():
    """Check a coupling given as a full matrix scaled by strength"""
    config = preset("ex1_ground_ground")
    config["couplings"] = [{"matrix": np.eye(4).tolist(), "strength": 0.5}]
    system = build_scenario(config).system
    assert np.allclose(system.couplings[0].entries, 0.5 * np.eye(4))


def test_sweep_config():
    """Check that initial state kinds replace the whole initial state"""
    base = preset("ex2_pure_pure")
    config = sweep_config(base, "subsystems/1/initial_state/temperature", 0.1)
    assert config["subsystems"][1]["initial_state"] == {"temperature": 0.1}
    assert base["subsystems"][1]["initial_state"] == {"pure": [1.0, 0.0, 1.0]}
    config = sweep_config(base, "couplings/0/strength", 0.3)
    assert config["couplings"][0]["strength"] == 0.3
    assert config["couplings"][0]["terms"] == base["couplings"][0]["terms"]
    ground = sweep_config(
        preset("ex1_ground_ground"), "subsystems/0/initial_state/gibbs", 2.0
    )
    assert ground["subsystems"][0]["initial_state"] == {"gibbs": 2.0}
    build_scenario(ground)


def test_run_scenarios(datadir):
    """Check that scenarios run from a CSV table"""
    config = load_configuration(datadir / "config.yml")
    table = load_scenario_table(datadir / "scenarios.csv")
    results = run_scenarios(config, table)
    assert len(results) == 2
    for (result, scenario_config), record in zip(results, table):
        assert result.scenario.name == record["name"]
        assert scenario_config["couplings"][0]["strength"] == (
            record["couplings/0/strength"]
        )
        assert result.passed
    weak, strong = results
    assert weak[1]["subsystems"][1]["initial_state"] == {"gibbs": 2.0}
    assert strong[1]["subsystems"][1]["initial_state"] == {"gibbs": 1.0}
    assert math.isfinite(weak[0].trajectory.snapshots[-1].sigma)
