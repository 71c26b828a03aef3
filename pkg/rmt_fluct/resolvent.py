"""Stieltjes transform probes on sampled spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Final

import numpy as np
import scipy.integrate

from .const import LOGGER, MIN_STATISTICAL_TRIALS
from .ensembles import SpectrumSample, semicircle_quantiles, semicircle_stieltjes
from .exceptions import InvalidInputError
from .output import write_csv
from .stats import jackknife_variance

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from .coordinator import SpectrumPool

REGION_BULK: Final = "bulk"
REGION_OUTSIDE: Final = "outside"
WINDOW_ENERGY: Final = 5.0
WINDOW_ETA: Final = 10.0
BOUND_WINDOW_ENERGY: Final = 6.0
LOCAL_LAW_PERCENTILE: Final = 95.0
VARIANCE_EXPONENT: Final = 2.2
SWEEP_MIN_TRIALS: Final = 500
ETA_FLOOR_EXPONENT: Final = -0.9
DEFAULT_ENERGY_NODES: Final = 41


@dataclass(frozen=True)
class SpectralPoint:
    """Class for holding a point E + i eta of the upper half plane."""

    energy: float
    eta: float

    def __post_init__(self) -> None:
        """Reject points off the upper half plane."""
        if not self.eta > 0.0:
            message = f"Spectral points need eta > 0, got {self.eta}"
            raise InvalidInputError(message)

    @property
    def z(self) -> complex:
        return complex(self.energy, self.eta)

    @property
    def region(self) -> str:
        if abs(self.energy) <= WINDOW_ENERGY and self.eta <= WINDOW_ETA:
            return REGION_BULK
        return REGION_OUTSIDE


def _as_z(point: SpectralPoint | complex) -> complex:
    if isinstance(point, SpectralPoint):
        return point.z
    z = complex(point)
    if not z.imag > 0.0:
        message = f"Spectral points need eta > 0, got {z}"
        raise InvalidInputError(message)
    return z


def _as_points(grid: Iterable[SpectralPoint | complex]) -> list[SpectralPoint]:
    points = []
    for point in grid:
        z = _as_z(point)
        points.append(SpectralPoint(z.real, z.imag))
    return points


def msc(point: SpectralPoint | complex) -> complex:
    """Semicircle Stieltjes transform on [-2, 2]."""
    return complex(semicircle_stieltjes(_as_z(point)))


def _canonical(spectrum: SpectrumSample | SpectrumPool | Any) -> np.ndarray:
    if hasattr(spectrum, "canonical"):
        return spectrum.canonical()
    return np.asarray(spectrum, dtype=float)


def trace_resolvent(
    spectrum: SpectrumSample | SpectrumPool | Any, point: SpectralPoint | complex
) -> complex | np.ndarray:
    """Tr G(z) = sum_j 1 / (lambda_j - z); one value per row for 2-D input."""
    values = _canonical(spectrum)
    traces = np.sum(1.0 / (values - _as_z(point)), axis=-1)
    return complex(traces) if values.ndim == 1 else traces


def stieltjes_empirical(
    spectrum: SpectrumSample | SpectrumPool | Any, point: SpectralPoint | complex
) -> complex | np.ndarray:
    """m(z) = Tr G(z) / n."""
    values = _canonical(spectrum)
    return trace_resolvent(values, point) / values.shape[-1]


@dataclass
class LocalLawRow:
    """Class for holding the local law deviation at one spectral point."""

    n: int
    energy: float
    eta: float
    percentile: float

    @property
    def scaled(self) -> float:
        """The deviation in units of 1 / (n eta)."""
        return self.percentile * self.n * self.eta


def local_law_deviation(
    pool: SpectrumPool, grid: Iterable[SpectralPoint | complex]
) -> list[LocalLawRow]:
    """95th percentile over trials of |m(z) - m_sc(z)|."""
    rows = []
    scale = math.log(pool.n) ** 4 / pool.n
    for point in _as_points(grid):
        if point.eta < scale:
            LOGGER.debug(
                "eta=%s is below (log n)^4/n=%.3g, local law not guaranteed",
                point.eta,
                scale,
            )
        deviation = np.abs(stieltjes_empirical(pool, point.z) - msc(point))
        rows.append(
            LocalLawRow(
                pool.n,
                point.energy,
                point.eta,
                float(np.percentile(deviation, LOCAL_LAW_PERCENTILE)),
            )
        )
    return rows


@dataclass
class VarTraceRow:
    """Class for holding Var(Tr G) at one spectral point."""

    n: int
    energy: float
    eta: float
    variance: float
    se: float

    @property
    def scaled(self) -> float:
        return self.eta**VARIANCE_EXPONENT * self.variance


def _check_trials(pool: SpectrumPool, minimum: int) -> None:
    if pool.trials < MIN_STATISTICAL_TRIALS:
        message = (
            f"{pool.trials} trials are too few, at least "
            f"{MIN_STATISTICAL_TRIALS} are needed"
        )
        raise InvalidInputError(message)
    if pool.trials < minimum:
        LOGGER.warning(
            "Only %d trials for a variance sweep, %d recommended", pool.trials, minimum
        )


def var_trace_sweep(
    pool: SpectrumPool, energy: float, etas: Iterable[float]
) -> list[VarTraceRow]:
    """Var(Tr G(E + i eta)) with jackknife errors for each eta."""
    _check_trials(pool, SWEEP_MIN_TRIALS)
    floor = pool.n**ETA_FLOOR_EXPONENT
    rows = []
    for eta in etas:
        if not floor < eta <= WINDOW_ETA:
            message = f"eta={eta} outside ({floor:.4g}, {WINDOW_ETA}] for n={pool.n}"
            raise InvalidInputError(message)
        traces = trace_resolvent(pool, complex(energy, eta))
        variance, se = jackknife_variance(traces)
        rows.append(VarTraceRow(pool.n, energy, eta, variance, se))
        LOGGER.debug("Var Tr G at eta=%s: %.6g +- %.2g", eta, variance, se)
    return rows


def export_var_trace_csv(rows: Iterable[VarTraceRow], path: Path) -> None:
    write_csv(
        path,
        ["n", "E", "eta", "var", "se", "eta^2.2*var"],
        ([row.n, row.energy, row.eta, row.variance, row.se, row.scaled] for row in rows),
    )


def energy_integrated_variance(
    pool: SpectrumPool,
    etas: Any,
    energy_window: tuple[float, float],
    energy_nodes: int = DEFAULT_ENERGY_NODES,
) -> np.ndarray:
    """int Var(Tr G(E + i eta)) dE over the window, per eta, by trapezoid."""
    low, high = energy_window
    if not -BOUND_WINDOW_ENERGY <= low < high <= BOUND_WINDOW_ENERGY:
        message = f"Energy window {energy_window} is not inside [-6, 6]"
        raise InvalidInputError(message)
    energies = np.linspace(low, high, energy_nodes)
    integrals = []
    for eta in np.asarray(etas, dtype=float):
        variances = [
            float(np.var(trace_resolvent(pool, complex(energy, eta)), ddof=1))
            for energy in energies
        ]
        integrals.append(scipy.integrate.trapezoid(variances, energies))
    return np.array(integrals)


def variance_bound_integral(
    pool: SpectrumPool,
    s_exponent: float,
    etas: Any,
    energy_window: tuple[float, float],
    *,
    energy_nodes: int = DEFAULT_ENERGY_NODES,
    integrated: np.ndarray | None = None,
) -> float:
    """int e^-eta eta^(2s-1) int Var(Tr G(E + i eta)) dE deta.

    This is the constant multiplying the squared H^s norm in the variance
    bound for a linear statistic. Pass integrated to reuse the inner
    integrals across exponents.
    """
    if not 1.0 <= s_exponent <= 2.0:  # noqa: PLR2004
        message = f"Sobolev exponent must lie in [1, 2], got {s_exponent}"
        raise InvalidInputError(message)
    etas = np.asarray(etas, dtype=float)
    if np.any(etas <= 0.0) or np.any(np.diff(etas) <= 0.0):
        message = "eta nodes must be positive and increasing"
        raise InvalidInputError(message)
    if integrated is None:
        integrated = energy_integrated_variance(pool, etas, energy_window, energy_nodes)
    weights = np.exp(-etas) * etas ** (2.0 * s_exponent - 1.0)
    return float(scipy.integrate.trapezoid(weights * integrated, etas))


@dataclass
class RigidityReport:
    """Class for holding scaled eigenvalue displacements, one per trial."""

    n: int
    deviations: np.ndarray

    @property
    def median(self) -> float:
        return float(np.median(self.deviations))

    @property
    def maximum(self) -> float:
        return float(np.max(self.deviations))


def rigidity_deviation(pool: SpectrumPool) -> RigidityReport:
    """max_j |lambda_j - gamma_j| n^(2/3) min(j, n + 1 - j)^(1/3)."""
    n = pool.n
    classical = semicircle_quantiles(n)
    j = np.arange(1, n + 1)
    weight = n ** (2.0 / 3.0) * np.minimum(j, n + 1 - j) ** (1.0 / 3.0)
    displacement = np.abs(np.sort(pool.canonical(), axis=1) - classical)
    return RigidityReport(n, np.max(displacement * weight, axis=1))
