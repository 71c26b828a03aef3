"""Random matrix fluctuation laboratory."""

from __future__ import annotations

from .cli import run_cli
from .config import ExperimentConfig, build_config, load_config
from .const import DOMAIN, TITLE
from .experiments import run_experiment

__all__ = [
    "DOMAIN",
    "TITLE",
    "ExperimentConfig",
    "build_config",
    "load_config",
    "run_cli",
    "run_experiment",
]
