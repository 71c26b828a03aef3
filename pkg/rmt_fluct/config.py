"""Experiment configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import voluptuous as vol
import yaml
from voluptuous.humanize import humanize_error

from .const import (
    CONF_BAND_COUNT,
    CONF_BANDS,
    CONF_CONTROL,
    CONF_COUNTING,
    CONF_DEFAULT,
    CONF_DEFORMED,
    CONF_EDGE_CONVENTION,
    CONF_EIGEN_BACKEND,
    CONF_ENERGY,
    CONF_ENSEMBLE,
    CONF_ENTRY_LAW,
    CONF_ETAS,
    CONF_EXACT_KERNEL,
    CONF_EXPERIMENT,
    CONF_FORM,
    CONF_FUNCTIONS,
    CONF_KAPPA4,
    CONF_KERNEL,
    CONF_KIND,
    CONF_LOGGER,
    CONF_LOGS,
    CONF_METHODS,
    CONF_N_LIST,
    CONF_NODES,
    CONF_OUTPUT_DIR,
    CONF_POINTS,
    CONF_RESOLVENT,
    CONF_SAMPLER,
    CONF_SEED,
    CONF_SOURCE,
    CONF_SVG,
    CONF_T_WINDOW,
    CONF_THRESHOLD,
    CONF_TRIALS,
    CONF_W2,
    DEFAULT_BAND_COUNT,
    DEFAULT_CONTOUR_FORM,
    DEFAULT_CONTOUR_NODES,
    DEFAULT_COUNTING_CONTROL,
    DEFAULT_COUNTING_THRESHOLD,
    DEFAULT_DEFORMED_POINTS,
    DEFAULT_DEFORMED_SOURCE,
    DEFAULT_EIGEN_BACKEND,
    DEFAULT_ENERGY,
    DEFAULT_ENSEMBLE,
    DEFAULT_ENTRY_LAW,
    DEFAULT_ETAS,
    DEFAULT_KERNEL_POINTS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_N_LIST,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SAMPLER,
    DEFAULT_SEED,
    DEFAULT_T_WINDOW,
    DEFAULT_TRIALS,
    DEFAULT_W2,
    EDGE_CONVENTIONS,
    EIGEN_BACKENDS,
    ENSEMBLE_KINDS,
    ENTRY_LAWS,
    EXPERIMENTS,
    LOG_LEVELS,
    SAMPLERS,
)
from .deformed import CONTOUR_FORMS, SOURCE_SAMPLED, SOURCE_SEMICIRCLE
from .ensembles import EnsembleSpec
from .exceptions import ConfigError, RmtFluctError
from .functions import TestFunction, expand_labels, get_function

MAX_BAND_COUNT = 6
DEFORMATION_SOURCES = (SOURCE_SEMICIRCLE, SOURCE_SAMPLED)


def _label(value: Any) -> str:
    try:
        return get_function(str(value)).label
    except RmtFluctError as ex:
        raise vol.Invalid(str(ex)) from ex


def _labels(value: Any) -> list[str]:
    """Expand groups, rejecting labels outside the corpus."""
    if isinstance(value, str):
        value = [value]
    try:
        return expand_labels(value)
    except RmtFluctError as ex:
        raise vol.Invalid(str(ex)) from ex


POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))
POSITIVE_INT = vol.All(vol.Coerce(int), vol.Range(min=1))

ENSEMBLE_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_KIND, default=DEFAULT_ENSEMBLE): vol.In(ENSEMBLE_KINDS),
        vol.Optional(CONF_ENTRY_LAW, default=DEFAULT_ENTRY_LAW): vol.In(ENTRY_LAWS),
        vol.Optional(CONF_EDGE_CONVENTION): vol.In(EDGE_CONVENTIONS),
        vol.Optional(CONF_KAPPA4): vol.Coerce(float),
        vol.Optional(CONF_W2, default=DEFAULT_W2): POSITIVE_FLOAT,
    }
)

METHODS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_SAMPLER, default=DEFAULT_SAMPLER): vol.In(SAMPLERS),
        vol.Optional(CONF_EIGEN_BACKEND, default=DEFAULT_EIGEN_BACKEND): vol.In(
            EIGEN_BACKENDS
        ),
        vol.Optional(CONF_EXACT_KERNEL, default=True): bool,
        vol.Optional(CONF_SVG, default=False): bool,
    }
)

COUNTING_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_THRESHOLD, default=DEFAULT_COUNTING_THRESHOLD): vol.Coerce(
            float
        ),
        vol.Optional(CONF_CONTROL, default=DEFAULT_COUNTING_CONTROL): _label,
    }
)

BANDS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_BAND_COUNT, default=DEFAULT_BAND_COUNT): vol.All(
            vol.Coerce(int), vol.Range(min=1, max=MAX_BAND_COUNT)
        ),
        vol.Optional(CONF_T_WINDOW, default=DEFAULT_T_WINDOW): POSITIVE_FLOAT,
    }
)

RESOLVENT_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_ENERGY, default=DEFAULT_ENERGY): vol.Coerce(float),
        vol.Optional(CONF_ETAS, default=list(DEFAULT_ETAS)): vol.All(
            [POSITIVE_FLOAT], vol.Length(min=1)
        ),
    }
)

KERNEL_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_POINTS, default=list(DEFAULT_KERNEL_POINTS)): vol.All(
            [vol.Coerce(float)], vol.Length(min=1)
        ),
    }
)

DEFORMED_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_SOURCE, default=DEFAULT_DEFORMED_SOURCE): vol.In(
            DEFORMATION_SOURCES
        ),
        vol.Optional(CONF_NODES, default=DEFAULT_CONTOUR_NODES): vol.All(
            vol.Coerce(int), vol.Range(min=64)
        ),
        vol.Optional(CONF_FORM, default=DEFAULT_CONTOUR_FORM): vol.In(CONTOUR_FORMS),
        vol.Optional(CONF_POINTS, default=list(DEFAULT_DEFORMED_POINTS)): vol.All(
            [vol.Coerce(float)], vol.Length(min=1)
        ),
    }
)

LOGGER_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_DEFAULT, default=DEFAULT_LOG_LEVEL): vol.In(LOG_LEVELS),
        vol.Optional(CONF_LOGS, default={}): {str: vol.In(LOG_LEVELS)},
    }
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_EXPERIMENT): vol.In(EXPERIMENTS),
        vol.Optional(CONF_ENSEMBLE, default={}): ENSEMBLE_SCHEMA,
        vol.Optional(CONF_FUNCTIONS, default=["bump"]): _labels,
        vol.Optional(CONF_N_LIST, default=list(DEFAULT_N_LIST)): vol.All(
            [POSITIVE_INT], vol.Length(min=1)
        ),
        vol.Optional(CONF_TRIALS, default=DEFAULT_TRIALS): POSITIVE_INT,
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(
            vol.Coerce(int), vol.Range(min=0)
        ),
        vol.Optional(CONF_OUTPUT_DIR, default=DEFAULT_OUTPUT_DIR): str,
        vol.Optional(CONF_METHODS, default={}): METHODS_SCHEMA,
        vol.Optional(CONF_COUNTING, default={}): COUNTING_SCHEMA,
        vol.Optional(CONF_BANDS, default={}): BANDS_SCHEMA,
        vol.Optional(CONF_RESOLVENT, default={}): RESOLVENT_SCHEMA,
        vol.Optional(CONF_KERNEL, default={}): KERNEL_SCHEMA,
        vol.Optional(CONF_DEFORMED, default={}): DEFORMED_SCHEMA,
        vol.Optional(CONF_LOGGER, default={}): LOGGER_SCHEMA,
    }
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Class for holding a validated experiment configuration.

    Per-experiment sections stay as validated mappings keyed by CONF_*.
    """

    experiment: str
    ensemble: EnsembleSpec
    functions: tuple[str, ...]
    n_list: tuple[int, ...]
    trials: int
    seed: int
    output_dir: Path
    methods: dict[str, Any] = field(default_factory=dict)
    counting: dict[str, Any] = field(default_factory=dict)
    bands: dict[str, Any] = field(default_factory=dict)
    resolvent: dict[str, Any] = field(default_factory=dict)
    kernel: dict[str, Any] = field(default_factory=dict)
    deformed: dict[str, Any] = field(default_factory=dict)
    logger: dict[str, Any] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def test_functions(self) -> list[TestFunction]:
        return [get_function(label) for label in self.functions]

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        trials: int | None = None,
        output_dir: Path | str | None = None,
    ) -> ExperimentConfig:
        """Apply command line overrides."""
        changes: dict[str, Any] = {}
        if seed is not None:
            changes["seed"] = seed
        if trials is not None:
            if trials < 1:
                message = f"Trials must be positive, got {trials}"
                raise ConfigError(message)
            changes["trials"] = trials
        if output_dir is not None:
            changes["output_dir"] = Path(output_dir)
        if not changes:
            return self
        options = dict(self.options)
        options.update(
            {key: str(value) if key == "output_dir" else value for key, value in changes.items()}
        )
        return replace(self, options=options, **changes)


def build_config(data: dict[str, Any] | None) -> ExperimentConfig:
    """Validate a raw mapping."""
    if not isinstance(data, dict):
        message = "Configuration must be a mapping of keys to values"
        raise ConfigError(message)
    try:
        options = CONFIG_SCHEMA(data)
    except vol.Invalid as ex:
        message = f"Invalid configuration: {humanize_error(data, ex)}"
        raise ConfigError(message) from ex
    ensemble = options[CONF_ENSEMBLE]
    try:
        spec = EnsembleSpec(
            kind=ensemble[CONF_KIND],
            n=options[CONF_N_LIST][0],
            entry_law=ensemble[CONF_ENTRY_LAW],
            edge_convention=ensemble.get(CONF_EDGE_CONVENTION),
            kappa4=ensemble.get(CONF_KAPPA4),
            w2=ensemble[CONF_W2],
        )
    except RmtFluctError as ex:
        message = f"Invalid ensemble: {ex}"
        raise ConfigError(message) from ex
    return ExperimentConfig(
        experiment=options[CONF_EXPERIMENT],
        ensemble=spec,
        functions=tuple(options[CONF_FUNCTIONS]),
        n_list=tuple(options[CONF_N_LIST]),
        trials=options[CONF_TRIALS],
        seed=options[CONF_SEED],
        output_dir=Path(options[CONF_OUTPUT_DIR]),
        methods=options[CONF_METHODS],
        counting=options[CONF_COUNTING],
        bands=options[CONF_BANDS],
        resolvent=options[CONF_RESOLVENT],
        kernel=options[CONF_KERNEL],
        deformed=options[CONF_DEFORMED],
        logger=options[CONF_LOGGER],
        options=options,
    )


def load_config(path: Path | str, experiment: str | None = None) -> ExperimentConfig:
    """Read and validate a YAML experiment file.

    A given experiment name replaces the one in the file.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as file:
            data = yaml.safe_load(file)
    except OSError as ex:
        message = f"Cannot read configuration {path}: {ex.strerror or ex}"
        raise ConfigError(message) from ex
    except yaml.YAMLError as ex:
        message = f"Cannot parse configuration {path}: {ex}"
        raise ConfigError(message) from ex
    if experiment is not None and isinstance(data, dict):
        data = {**data, CONF_EXPERIMENT: experiment}
    return build_config(data)
