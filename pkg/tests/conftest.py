"""Global fixtures."""

# Fixtures that are defined in conftest.py are available across all tests. You can also
# define fixtures within a particular test file to scope them locally.
#
# See here for more info: https://docs.pytest.org/en/latest/fixture.html (note that
# pytest includes fixtures OOB which you can use as defined on this page)

import logging
from collections.abc import Generator

import pytest

from rmt_fluct.const import ENSEMBLE_GUE, LOGGER, THREADS_ENV_VAR
from rmt_fluct.coordinator import SpectrumPool, build_pool
from rmt_fluct.ensembles import EnsembleSpec

POOL_N = 40
POOL_SEED = 11
POOL_TRIALS = 600


@pytest.fixture(autouse=True)
def _limit_worker_threads(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep the spectrum workers small for all tests."""
    monkeypatch.setenv(THREADS_ENV_VAR, "2")


@pytest.fixture(autouse=True)
def _restore_log_levels() -> Generator[None, None, None]:
    """Undo level changes made by the command line tests."""
    root_level = logging.getLogger().level
    yield
    logging.getLogger().setLevel(root_level)
    LOGGER.setLevel(logging.NOTSET)


@pytest.fixture(scope="session")
def gue_pool() -> SpectrumPool:
    """Spectra shared by the statistical tests."""
    return build_pool(
        EnsembleSpec(ENSEMBLE_GUE, POOL_N), POOL_SEED, POOL_TRIALS, workers=2
    )
