"""Worker pool drawing spectra for the experiments."""

from __future__ import annotations

import asyncio
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, TypeVar

import numpy as np

from .const import (
    BACKEND_LAPACK,
    LOGGER,
    SAMPLER_TRIDIAGONAL,
    THREADS_ENV_VAR,
)
from .ensembles import EnsembleSpec, SpectrumSample, rescale_to_canonical, sample_spectrum
from .exceptions import ConfigError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

DEFAULT_CHUNK_TRIALS = 64

T = TypeVar("T")


@dataclass
class SpectrumPool:
    """Class for holding spectra of consecutive trials, one row per trial."""

    spec: EnsembleSpec
    seed: int
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[1]

    @property
    def trials(self) -> int:
        return self.eigenvalues.shape[0]

    def canonical(self) -> np.ndarray:
        """Rows mapped to the [-2, 2] scale."""
        return rescale_to_canonical(self.eigenvalues, self.spec.edge_convention)

    def samples(self) -> list[SpectrumSample]:
        return [
            SpectrumSample(row, self.seed, trial, self.spec)
            for trial, row in enumerate(self.eigenvalues)
        ]


def worker_count() -> int:
    """Thread cap from the environment, else the CPU count."""
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError as ex:
        message = f"{THREADS_ENV_VAR} must be an integer, got {value!r}"
        raise ConfigError(message) from ex
    if workers < 1:
        message = f"{THREADS_ENV_VAR} must be positive, got {workers}"
        raise ConfigError(message)
    return workers


class SpectrumPoolCoordinator:
    """Class to manage drawing spectra across a thread pool.

    Every trial owns its generator, so the pool contents depend only on
    (seed, trial) and never on the worker count or scheduling.
    """

    def __init__(
        self,
        *,
        sampler: str = SAMPLER_TRIDIAGONAL,
        backend: str = BACKEND_LAPACK,
        workers: int | None = None,
        chunk_trials: int = DEFAULT_CHUNK_TRIALS,
    ) -> None:
        """Initialize the coordinator."""
        self.sampler = sampler
        self.backend = backend
        self.workers = workers or worker_count()
        self.chunk_trials = chunk_trials

    def _draw_chunk(self, spec: EnsembleSpec, seed: int, trials: range) -> np.ndarray:
        LOGGER.debug(
            "Drawing trials %d-%d of %s n=%d", trials.start, trials.stop - 1, spec.kind, spec.n
        )
        return np.vstack(
            [
                sample_spectrum(
                    spec, seed, trial, sampler=self.sampler, backend=self.backend
                ).eigenvalues
                for trial in trials
            ]
        )

    def _chunks(self, trials: int) -> list[range]:
        return [
            range(start, min(start + self.chunk_trials, trials))
            for start in range(0, trials, self.chunk_trials)
        ]

    async def async_map(
        self, func: Callable[..., T], items: Iterable[Sequence[Any]]
    ) -> list[T]:
        """Run func(*item) for every item on the pool, results in item order."""
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(
                await asyncio.gather(
                    *[loop.run_in_executor(executor, func, *item) for item in items]
                )
            )

    async def async_build(self, spec: EnsembleSpec, seed: int, trials: int) -> SpectrumPool:
        """Draw trials 0..trials-1."""
        chunks = await self.async_map(
            self._draw_chunk, [(spec, seed, chunk) for chunk in self._chunks(trials)]
        )
        LOGGER.info("Drew %d spectra of %s n=%d", trials, spec.kind, spec.n)
        return SpectrumPool(spec, seed, np.vstack(chunks))

    async def async_build_many(
        self, spec: EnsembleSpec, seed: int, n_list: Iterable[int], trials: int
    ) -> dict[int, SpectrumPool]:
        """One pool per dimension, keyed by n."""
        sizes = list(n_list)
        pools = await asyncio.gather(
            *[self.async_build(spec.with_n(n), seed, trials) for n in sizes]
        )
        return dict(zip(sizes, pools, strict=True))


def build_pool(
    spec: EnsembleSpec, seed: int, trials: int, **kwargs: Any
) -> SpectrumPool:
    """Blocking wrapper around SpectrumPoolCoordinator.async_build."""
    return asyncio.run(SpectrumPoolCoordinator(**kwargs).async_build(spec, seed, trials))
