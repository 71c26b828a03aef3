"""The tests for the config file."""

from pathlib import Path
from typing import Any

import pytest

from rmt_fluct.config import build_config, load_config
from rmt_fluct.const import (
    CONF_DEFAULT,
    CONF_EXACT_KERNEL,
    CONF_LOGS,
    CONF_NODES,
    CONF_SAMPLER,
    DEFAULT_N_LIST,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EDGE_2,
    EDGE_SQRT2,
    ENSEMBLE_GUE,
    ENSEMBLE_JOHANSSON,
    SAMPLER_TRIDIAGONAL,
)
from rmt_fluct.exceptions import ConfigError
from rmt_fluct.functions import CLASS_HOLDER

from .utils import fixture_path, load_yaml_fixture


def test_defaults() -> None:
    """Test a minimal configuration."""
    config = build_config({"experiment": "clt"})
    assert config.experiment == "clt"
    assert config.ensemble.kind == ENSEMBLE_GUE
    assert config.ensemble.edge_convention == EDGE_2
    assert config.functions == ("bump",)
    assert config.n_list == DEFAULT_N_LIST
    assert config.trials == DEFAULT_TRIALS
    assert config.seed == DEFAULT_SEED
    assert config.output_dir == Path("out")
    assert config.methods[CONF_SAMPLER] == SAMPLER_TRIDIAGONAL
    assert config.methods[CONF_EXACT_KERNEL]
    assert config.logger[CONF_DEFAULT] == "info"
    assert config.test_functions[0].label == "bump"


def test_johansson_convention() -> None:
    """Test the ensemble picks its own edge convention."""
    config = build_config({"experiment": "clt", "ensemble": {"kind": "johansson"}})
    assert config.ensemble.kind == ENSEMBLE_JOHANSSON
    assert config.ensemble.edge_convention == EDGE_SQRT2


def test_function_groups() -> None:
    """Test group names expand to corpus labels."""
    config = build_config({"experiment": "limit-var", "functions": "holder"})
    assert config.functions
    assert all(
        function.regularity.kind == CLASS_HOLDER for function in config.test_functions
    )
    assert "abs_pow_0.6" in config.functions


@pytest.mark.parametrize(
    ("data", "message"),
    [
        ({}, "Invalid configuration"),
        ({"experiment": "fit"}, "Invalid configuration"),
        ({"experiment": "clt", "trials": 0}, "Invalid configuration"),
        ({"experiment": "clt", "n_list": []}, "Invalid configuration"),
        ({"experiment": "clt", "functions": ["nope"]}, "Unknown test function"),
        ({"experiment": "bands", "bands": {"band_count": 9}}, "Invalid configuration"),
        ({"experiment": "deformed", "deformed": {"nodes": 32}}, "Invalid configuration"),
        ({"experiment": "clt", "logger": {"default": "loud"}}, "Invalid configuration"),
        ({"experiment": "clt", "colour": "red"}, "Invalid configuration"),
        (
            {"experiment": "clt", "ensemble": {"kind": "gue", "kappa4": 1.0}},
            "Invalid ensemble",
        ),
        (["clt"], "must be a mapping"),
    ],
    ids=(
        "missing_experiment",
        "unknown_experiment",
        "zero_trials",
        "empty_n_list",
        "unknown_function",
        "too_many_bands",
        "too_few_nodes",
        "log_level",
        "extra_key",
        "gue_kappa4",
        "not_a_mapping",
    ),
)
def test_invalid(data: Any, message: str) -> None:
    """Test invalid configurations."""
    with pytest.raises(ConfigError, match=message):
        build_config(data)


def test_load_config() -> None:
    """Test loading a YAML file."""
    config = load_config(fixture_path("clt.yaml"))
    assert config.functions == ("bump", "x2")
    assert config.n_list == (20, 40)
    assert config.trials == 200
    assert config.seed == 7
    assert config.output_dir == Path("out/clt")
    assert not config.methods[CONF_EXACT_KERNEL]
    assert config.logger[CONF_LOGS] == {"rmt_fluct.coordinator": "debug"}
    assert config.options["seed"] == 7
    assert load_yaml_fixture("clt.yaml")["functions"] == ["x2", "bump"]


def test_load_config_experiment_override() -> None:
    """Test the command replaces the experiment in the file."""
    config = load_config(fixture_path("deformed.yaml"), "kernel")
    assert config.experiment == "kernel"
    assert config.deformed[CONF_NODES] == 512


@pytest.mark.parametrize(
    ("name", "message"),
    [
        ("missing.yaml", "Cannot read configuration"),
        ("broken.yaml", "Cannot parse configuration"),
        ("not_a_mapping.yaml", "must be a mapping"),
    ],
    ids=("missing", "broken", "not_a_mapping"),
)
def test_load_config_errors(name: str, message: str) -> None:
    """Test unreadable configuration files."""
    with pytest.raises(ConfigError, match=message):
        load_config(fixture_path(name))


def test_with_overrides(tmp_path: Path) -> None:
    """Test command line overrides."""
    config = build_config({"experiment": "clt"})
    assert config.with_overrides() is config
    changed = config.with_overrides(seed=5, trials=300, output_dir=tmp_path)
    assert (changed.seed, changed.trials, changed.output_dir) == (5, 300, tmp_path)
    assert changed.options["seed"] == 5
    assert changed.options["output_dir"] == str(tmp_path)
    assert config.seed == DEFAULT_SEED
    with pytest.raises(ConfigError, match="Trials must be positive"):
        config.with_overrides(trials=0)


def test_example_config() -> None:
    """Test the example experiment file shipped with the repository."""
    config = load_config(Path(__file__).parent.parent / "config" / "experiment.yaml")
    assert config.experiment == "clt"
    assert "indicator" in config.functions
    assert "abs_pow_0.6" in config.functions
    assert "gaussian" in config.functions
    assert config.methods["svg"]
    assert config.logger[CONF_LOGS] == {"rmt_fluct": "info"}
