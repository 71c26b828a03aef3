"""Diagnostics support."""

from __future__ import annotations

import json
import platform
from functools import cache
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import TYPE_CHECKING, Any, Final

from .const import DOMAIN, LOGGER

if TYPE_CHECKING:
    from .config import ExperimentConfig

DIAGNOSTICS_FILE: Final = "diagnostics.json"
MANIFEST_FILE: Final = Path(__file__).parent / "manifest.json"


@cache
def _manifest() -> dict[str, Any]:
    with MANIFEST_FILE.open(encoding="utf-8") as file:
        return json.load(file)


def _versions() -> dict[str, str | None]:
    versions: dict[str, str | None] = {
        DOMAIN: _manifest()["version"],
        "python": platform.python_version(),
    }
    for requirement in _manifest()["requirements"]:
        name = requirement.split("==")[0]
        try:
            versions[name] = version(name)
        except PackageNotFoundError:
            versions[name] = None
    return versions


def get_experiment_diagnostics(
    config: ExperimentConfig, extra: dict[str, Any] | None = None
) -> dict[str, Any]:
    """Return diagnostics for an experiment run."""
    return {
        "experiment": config.experiment,
        "seed": config.seed,
        "options": dict(config.options),
        "versions": _versions(),
        **(extra or {}),
    }


def write_diagnostics(
    config: ExperimentConfig, extra: dict[str, Any] | None = None
) -> Path:
    """Write diagnostics.json into the output directory."""
    path = config.output_dir / DIAGNOSTICS_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as file:
        json.dump(get_experiment_diagnostics(config, extra), file, indent=2, default=str)
    LOGGER.debug("Wrote %s", path)
    return path
