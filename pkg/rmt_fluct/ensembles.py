"""Random matrix ensembles and their spectra."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Final

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from .const import (
    BACKEND_HOUSEHOLDER_QL,
    BACKEND_LAPACK,
    EDGE_2,
    EDGE_CONVENTIONS,
    EDGE_SCALE,
    EDGE_SQRT2,
    EIGEN_BACKENDS,
    ENSEMBLE_GOE,
    ENSEMBLE_GUE,
    ENSEMBLE_JOHANSSON,
    ENSEMBLE_KINDS,
    ENSEMBLE_WIGNER,
    LAW_GAUSSIAN,
    LAW_RADEMACHER,
    LAW_THREE_POINT,
    LAW_UNIFORM,
    SAMPLER_DENSE,
    SAMPLER_TRIDIAGONAL,
    SAMPLERS,
)
from .eigensolver import eig_hermitian, eig_tridiagonal
from .exceptions import InvalidInputError
from .output import write_csv

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable
    from pathlib import Path

GAUSSIAN_FOURTH_MOMENT: Final = 3.0


@dataclass(frozen=True)
class EntryLaw:
    """Law of a real matrix coordinate, standardized before use."""

    name: str
    draw: Callable[[np.random.Generator, tuple[int, ...]], np.ndarray]
    mean: float = 0.0
    variance: float | None = 1.0
    fourth_moment: float | None = None
    symmetric: bool = True

    def standardized(
        self, rng: np.random.Generator, shape: tuple[int, ...]
    ) -> np.ndarray:
        """Draw mean-zero, unit-variance samples."""
        if self.mean != 0.0:
            message = f"Entry law {self.name} has nonzero mean {self.mean}"
            raise InvalidInputError(message)
        if self.variance is None or self.variance <= 0.0:
            message = f"Entry law {self.name} does not declare a second moment"
            raise InvalidInputError(message)
        return self.draw(rng, shape) / math.sqrt(self.variance)

    @property
    def matches_gaussian(self) -> bool:
        """Whether the law agrees with N(0, 1) through the fifth moment."""
        return (
            self.symmetric
            and self.mean == 0.0
            and self.variance is not None
            and self.fourth_moment is not None
            and math.isclose(
                self.fourth_moment / self.variance**2, GAUSSIAN_FOURTH_MOMENT
            )
        )

    def complex_fourth_cumulant(self, w2: float) -> float:
        """Return E|w|^4 - 2(E|w|^2)^2 for w = sqrt(w2/2)(X + iY)."""
        if self.fourth_moment is None or self.variance is None:
            return 0.0
        kurtosis = self.fourth_moment / self.variance**2
        return w2**2 * (kurtosis - 3.0) / 2.0


def _draw_rademacher(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.integers(0, 2, size=shape) * 2.0 - 1.0


def _draw_uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=shape)


def _draw_three_point(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return math.sqrt(3.0) * rng.choice(
        np.array([-1.0, 0.0, 1.0]), size=shape, p=[1 / 6, 2 / 3, 1 / 6]
    )


ENTRY_LAW_TABLE: Final[dict[str, EntryLaw]] = {
    LAW_GAUSSIAN: EntryLaw(
        LAW_GAUSSIAN,
        lambda rng, shape: rng.standard_normal(shape),
        fourth_moment=3.0,
    ),
    LAW_RADEMACHER: EntryLaw(LAW_RADEMACHER, _draw_rademacher, fourth_moment=1.0),
    LAW_UNIFORM: EntryLaw(LAW_UNIFORM, _draw_uniform, fourth_moment=9.0 / 5.0),
    LAW_THREE_POINT: EntryLaw(LAW_THREE_POINT, _draw_three_point, fourth_moment=3.0),
}


def resolve_entry_law(entry_law: str | EntryLaw) -> EntryLaw:
    """Return the law object for a name or pass a custom law through."""
    if isinstance(entry_law, EntryLaw):
        return entry_law
    if entry_law not in ENTRY_LAW_TABLE:
        message = f"Unknown entry law: {entry_law}"
        raise InvalidInputError(message)
    return ENTRY_LAW_TABLE[entry_law]


@dataclass(frozen=True)
class EnsembleSpec:
    """Matrix ensemble descriptor."""

    kind: str = ENSEMBLE_GUE
    n: int = 100
    entry_law: str | EntryLaw = LAW_GAUSSIAN
    edge_convention: str | None = None
    kappa4: float | None = None
    w2: float = 1.0

    def __post_init__(self) -> None:
        """Validate and fill convention defaults."""
        if self.kind not in ENSEMBLE_KINDS:
            message = f"Unknown ensemble kind: {self.kind}"
            raise InvalidInputError(message)
        if self.n < 1:
            message = f"Matrix dimension must be positive, got {self.n}"
            raise InvalidInputError(message)
        if self.w2 <= 0:
            message = f"w2 must be positive, got {self.w2}"
            raise InvalidInputError(message)
        law = resolve_entry_law(self.entry_law)
        if self.edge_convention is None:
            object.__setattr__(
                self,
                "edge_convention",
                EDGE_SQRT2 if self.kind == ENSEMBLE_JOHANSSON else EDGE_2,
            )
        elif self.edge_convention not in EDGE_CONVENTIONS:
            message = f"Unknown edge convention: {self.edge_convention}"
            raise InvalidInputError(message)
        if self.kind == ENSEMBLE_GUE:
            if self.kappa4 not in (None, 0.0):
                message = f"GUE has kappa4 = 0, got {self.kappa4}"
                raise InvalidInputError(message)
            object.__setattr__(self, "kappa4", 0.0)
        elif self.kappa4 is None:
            object.__setattr__(self, "kappa4", law.complex_fourth_cumulant(self.w2))

    def with_n(self, n: int) -> EnsembleSpec:
        """Return the same ensemble at another dimension."""
        return EnsembleSpec(
            self.kind, n, self.entry_law, self.edge_convention, self.kappa4, self.w2
        )


@dataclass(frozen=True)
class SpectrumSample:
    """Sorted eigenvalues of one matrix draw."""

    eigenvalues: np.ndarray
    seed: int
    trial: int
    ensemble: EnsembleSpec = field(compare=False)

    @property
    def n(self) -> int:
        """Number of eigenvalues."""
        return len(self.eigenvalues)

    def canonical(self) -> np.ndarray:
        """Eigenvalues mapped to the [-2, 2] scale."""
        return rescale_to_canonical(self.eigenvalues, self.ensemble.edge_convention)


def rng_for(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator owned by a single (seed, trial) pair."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,)))
    )


def rescale_to_canonical(values: Any, convention: str | None) -> np.ndarray:
    """Map values from an edge convention to the canonical [-2, 2] scale."""
    return np.asarray(values, dtype=float) / EDGE_SCALE[convention or EDGE_2]


def rescale_from_canonical(values: Any, convention: str | None) -> np.ndarray:
    """Map canonical values to an edge convention."""
    return np.asarray(values, dtype=float) * EDGE_SCALE[convention or EDGE_2]


def semicircle_cdf(x: Any, radius: float = 2.0) -> np.ndarray:
    """Cumulative distribution of the semicircle law on [-radius, radius]."""
    u = np.clip(np.asarray(x, dtype=float) / radius, -1.0, 1.0)
    return 0.5 + (u * np.sqrt(1.0 - u**2) + np.arcsin(u)) / math.pi


def semicircle_density(x: Any, radius: float = 2.0) -> np.ndarray:
    """Semicircle density on [-radius, radius]."""
    x = np.asarray(x, dtype=float)
    inside = np.clip(radius**2 - x**2, 0.0, None)
    return 2.0 * np.sqrt(inside) / (math.pi * radius**2)


def semicircle_stieltjes(w: Any, radius: float = 2.0) -> np.ndarray:
    """m(w) = int rho(t) / (t - w) dt, decaying like -1/w."""
    w = np.asarray(w, dtype=complex)
    return 2.0 * (-w + np.sqrt(w - radius) * np.sqrt(w + radius)) / radius**2


def semicircle_quantiles(n: int, radius: float = 2.0) -> np.ndarray:
    """Classical locations F^{-1}((j - 1/2)/n), j = 1..n."""
    return np.array(
        [
            brentq(
                lambda x, level=(j - 0.5) / n: float(semicircle_cdf(x, radius)) - level,
                -radius,
                radius,
                xtol=1e-14,
            )
            for j in range(1, n + 1)
        ]
    )


def _eigvals(matrix: np.ndarray, backend: str) -> np.ndarray:
    if backend == BACKEND_HOUSEHOLDER_QL:
        return eig_hermitian(matrix)
    return scipy.linalg.eigvalsh(matrix)


def _eigvals_tridiagonal(
    diagonal: np.ndarray, off: np.ndarray, backend: str
) -> np.ndarray:
    if len(diagonal) == 1:
        return diagonal.copy()
    if backend == BACKEND_HOUSEHOLDER_QL:
        return eig_tridiagonal(diagonal, off)
    return scipy.linalg.eigh_tridiagonal(diagonal, off, eigvals_only=True)


def _check_backend(backend: str) -> None:
    if backend not in EIGEN_BACKENDS:
        message = f"Unknown eigen backend: {backend}"
        raise InvalidInputError(message)


def _hermitian_wigner(
    rng: np.random.Generator, n: int, law: EntryLaw, w2: float = 1.0
) -> np.ndarray:
    """Complex Hermitian W with unit-variance real diagonal and E|w_ij|^2 = w2."""
    diagonal = law.standardized(rng, (n,))
    scale = math.sqrt(w2 / 2.0)
    real = law.standardized(rng, (n, n))
    imag = law.standardized(rng, (n, n))
    upper = np.triu(scale * (real + 1j * imag), 1)
    return upper + upper.conj().T + np.diag(diagonal)


def _spectrum(
    values: np.ndarray, seed: int, trial: int, spec: EnsembleSpec, canonical: bool
) -> SpectrumSample:
    values = np.sort(values)
    if canonical:
        values = rescale_from_canonical(values, spec.edge_convention)
    return SpectrumSample(values, seed, trial, spec)


def sample_gue_dense(
    n: int, seed: int, trial: int, *, backend: str = BACKEND_LAPACK
) -> SpectrumSample:
    """Spectrum of W/sqrt(n) for a dense GUE matrix W."""
    _check_backend(backend)
    spec = EnsembleSpec(ENSEMBLE_GUE, n)
    w = _hermitian_wigner(rng_for(seed, trial), n, ENTRY_LAW_TABLE[LAW_GAUSSIAN])
    return _spectrum(_eigvals(w / math.sqrt(n), backend), seed, trial, spec, True)


def _beta_tridiagonal(
    rng: np.random.Generator, n: int, beta: int
) -> tuple[np.ndarray, np.ndarray]:
    """Tridiagonal beta-Hermite model with the dense ensembles' normalization."""
    diagonal = rng.standard_normal(n) * math.sqrt(2.0 / beta)
    degrees = beta * np.arange(n - 1, 0, -1)
    off = np.sqrt(rng.chisquare(degrees)) / math.sqrt(beta)
    return diagonal, off


def sample_gue_tridiagonal(
    n: int, seed: int, trial: int, *, backend: str = BACKEND_LAPACK
) -> SpectrumSample:
    """GUE spectrum through the beta = 2 tridiagonal model."""
    _check_backend(backend)
    spec = EnsembleSpec(ENSEMBLE_GUE, n)
    diagonal, off = _beta_tridiagonal(rng_for(seed, trial), n, 2)
    scale = 1.0 / math.sqrt(n)
    values = _eigvals_tridiagonal(diagonal * scale, off * scale, backend)
    return _spectrum(values, seed, trial, spec, True)


def sample_goe_dense(
    n: int, seed: int, trial: int, *, backend: str = BACKEND_LAPACK
) -> SpectrumSample:
    """Spectrum of W/sqrt(n), W real symmetric with N(0,1) off and N(0,2) diagonal."""
    _check_backend(backend)
    spec = EnsembleSpec(ENSEMBLE_GOE, n)
    rng = rng_for(seed, trial)
    diagonal = rng.standard_normal(n) * math.sqrt(2.0)
    upper = np.triu(rng.standard_normal((n, n)), 1)
    w = upper + upper.T + np.diag(diagonal)
    return _spectrum(_eigvals(w / math.sqrt(n), backend), seed, trial, spec, True)


def sample_goe_tridiagonal(
    n: int, seed: int, trial: int, *, backend: str = BACKEND_LAPACK
) -> SpectrumSample:
    """GOE spectrum through the beta = 1 tridiagonal model."""
    _check_backend(backend)
    spec = EnsembleSpec(ENSEMBLE_GOE, n)
    diagonal, off = _beta_tridiagonal(rng_for(seed, trial), n, 1)
    scale = 1.0 / math.sqrt(n)
    values = _eigvals_tridiagonal(diagonal * scale, off * scale, backend)
    return _spectrum(values, seed, trial, spec, True)


def sample_wigner(
    spec: EnsembleSpec, seed: int, trial: int, *, backend: str = BACKEND_LAPACK
) -> SpectrumSample:
    """Spectrum of W/sqrt(n) under the declared entry law."""
    _check_backend(backend)
    if spec.kind != ENSEMBLE_WIGNER:
        message = f"sample_wigner needs a {ENSEMBLE_WIGNER} ensemble, got {spec.kind}"
        raise InvalidInputError(message)
    law = resolve_entry_law(spec.entry_law)
    w = _hermitian_wigner(rng_for(seed, trial), spec.n, law, spec.w2)
    return _spectrum(
        _eigvals(w / math.sqrt(spec.n), backend), seed, trial, spec, True
    )


def sample_johansson(
    n: int,
    base_entry_law: str | EntryLaw,
    seed: int,
    trial: int,
    *,
    backend: str = BACKEND_LAPACK,
) -> SpectrumSample:
    """Spectrum of (W + V)/(2 sqrt(n)) with V an independent GUE matrix."""
    _check_backend(backend)
    law = resolve_entry_law(base_entry_law)
    if not law.matches_gaussian:
        message = f"Entry law {law.name} does not match GUE through five moments"
        raise InvalidInputError(message)
    spec = EnsembleSpec(ENSEMBLE_JOHANSSON, n, base_entry_law)
    rng = rng_for(seed, trial)
    w = _hermitian_wigner(rng, n, law)
    v = _hermitian_wigner(rng, n, ENTRY_LAW_TABLE[LAW_GAUSSIAN])
    values = _eigvals((w + v) / (2.0 * math.sqrt(n)), backend)
    # Natural scale of M is the sqrt(2) edge.
    values = rescale_from_canonical(
        rescale_to_canonical(values, EDGE_SQRT2), spec.edge_convention
    )
    return _spectrum(values, seed, trial, spec, False)


def sample_spectrum(
    spec: EnsembleSpec,
    seed: int,
    trial: int,
    *,
    sampler: str = SAMPLER_TRIDIAGONAL,
    backend: str = BACKEND_LAPACK,
) -> SpectrumSample:
    """Draw one spectrum of any supported ensemble."""
    if sampler not in SAMPLERS:
        message = f"Unknown sampler: {sampler}"
        raise InvalidInputError(message)
    if spec.kind == ENSEMBLE_WIGNER:
        return sample_wigner(spec, seed, trial, backend=backend)
    if spec.kind == ENSEMBLE_JOHANSSON:
        sample = sample_johansson(spec.n, spec.entry_law, seed, trial, backend=backend)
    else:
        samplers: dict[tuple[str, str], Callable[..., SpectrumSample]] = {
            (ENSEMBLE_GUE, SAMPLER_DENSE): sample_gue_dense,
            (ENSEMBLE_GUE, SAMPLER_TRIDIAGONAL): sample_gue_tridiagonal,
            (ENSEMBLE_GOE, SAMPLER_DENSE): sample_goe_dense,
            (ENSEMBLE_GOE, SAMPLER_TRIDIAGONAL): sample_goe_tridiagonal,
        }
        sample = samplers[(spec.kind, sampler)](spec.n, seed, trial, backend=backend)
    if sample.ensemble.edge_convention == spec.edge_convention:
        return SpectrumSample(sample.eigenvalues, seed, trial, spec)
    return SpectrumSample(
        rescale_from_canonical(sample.canonical(), spec.edge_convention),
        seed,
        trial,
        spec,
    )


def write_spectra_csv(samples: Iterable[SpectrumSample], path: Path) -> None:
    """Persist spectra, one row per trial."""
    rows = [
        [sample.seed, sample.trial, *(repr(float(x)) for x in sample.eigenvalues)]
        for sample in samples
    ]
    width = max((len(row) - 2 for row in rows), default=0)
    header = ["seed", "trial", *(f"lambda_{j}" for j in range(1, width + 1))]
    write_csv(path, header, rows)


def read_spectra_csv(path: Path, spec: EnsembleSpec) -> list[SpectrumSample]:
    """Load spectra written by write_spectra_csv."""
    with path.open(encoding="utf-8", newline="") as file:
        reader = csv.reader(line for line in file if not line.startswith("#"))
        next(reader, None)
        return [
            SpectrumSample(
                np.array([float(x) for x in row[2:]]), int(row[0]), int(row[1]), spec
            )
            for row in reader
        ]
