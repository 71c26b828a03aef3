"""The tests for the coordinator file."""

import logging

import numpy as np
import pytest

from rmt_fluct.const import ENSEMBLE_GOE, ENSEMBLE_GUE, THREADS_ENV_VAR
from rmt_fluct.coordinator import SpectrumPoolCoordinator, worker_count
from rmt_fluct.ensembles import EnsembleSpec, sample_spectrum
from rmt_fluct.exceptions import ConfigError


async def test_build() -> None:
    """Test the pool rows are the per-trial spectra."""
    spec = EnsembleSpec(ENSEMBLE_GOE, 12)
    pool = await SpectrumPoolCoordinator(workers=2, chunk_trials=3).async_build(
        spec, 5, 10
    )
    assert pool.n == 12
    assert pool.trials == 10
    np.testing.assert_array_equal(
        pool.eigenvalues[7], sample_spectrum(spec, 5, 7).eigenvalues
    )
    samples = pool.samples()
    assert [sample.trial for sample in samples] == list(range(10))
    assert samples[3].seed == 5


@pytest.mark.parametrize(
    ("workers", "chunk_trials"),
    [(1, 64), (2, 1), (4, 7)],
    ids=("serial", "single_trials", "uneven_chunks"),
)
async def test_determinism(workers: int, chunk_trials: int) -> None:
    """Test the pool does not depend on the worker layout."""
    spec = EnsembleSpec(ENSEMBLE_GUE, 16)
    reference = await SpectrumPoolCoordinator(workers=1).async_build(spec, 3, 20)
    pool = await SpectrumPoolCoordinator(
        workers=workers, chunk_trials=chunk_trials
    ).async_build(spec, 3, 20)
    np.testing.assert_array_equal(pool.eigenvalues, reference.eigenvalues)


async def test_build_many(caplog: pytest.LogCaptureFixture) -> None:
    """Test one pool per dimension."""
    caplog.set_level(logging.INFO)
    coordinator = SpectrumPoolCoordinator(workers=2)
    pools = await coordinator.async_build_many(
        EnsembleSpec(ENSEMBLE_GUE, 10), 1, [8, 16], 4
    )
    assert list(pools) == [8, 16]
    assert pools[16].eigenvalues.shape == (4, 16)
    assert pools[8].spec.n == 8
    assert "Drew 4 spectra of gue n=16" in caplog.text


async def test_async_map() -> None:
    """Test results come back in item order."""
    coordinator = SpectrumPoolCoordinator(workers=3)
    assert await coordinator.async_map(pow, [(2, 3), (3, 2), (5, 1)]) == [8, 9, 5]


def test_worker_count(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the thread cap from the environment."""
    assert worker_count() == 2
    monkeypatch.delenv(THREADS_ENV_VAR)
    assert worker_count() >= 1
    for value in ("many", "0"):
        monkeypatch.setenv(THREADS_ENV_VAR, value)
        with pytest.raises(ConfigError, match=THREADS_ENV_VAR):
            worker_count()
