"""Littlewood-Paley band machinery on the periodic grid.

The low-pass multiplier equals 1 on |xi| <= 3/4 and vanishes for
|xi| >= 4/3. Band k is omega(2^-k xi) with omega(xi) = chi(xi/2) - chi(xi),
supported in 3/4 <= |xi| <= 8/3, so the partition telescopes exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Final

import numpy as np

from .const import BESOV_FLAVORS, FLAVOR_B22, LOGGER
from .exceptions import InvalidInputError
from .functions import TestFunction, smooth_step
from .output import write_csv

if TYPE_CHECKING:
    from pathlib import Path

    from .functions import Grid

LOW_PASS_PLATEAU: Final = 0.75
LOW_PASS_SUPPORT: Final = 4.0 / 3.0
BAND_INNER: Final = LOW_PASS_PLATEAU
BAND_OUTER: Final = 2.0 * LOW_PASS_SUPPORT


def low_pass(xi: Any) -> np.ndarray:
    """Smooth even cutoff chi."""
    xi = np.abs(np.asarray(xi, dtype=float))
    return smooth_step(
        (LOW_PASS_SUPPORT - xi) / (LOW_PASS_SUPPORT - LOW_PASS_PLATEAU)
    )


@dataclass(frozen=True)
class DyadicPartition:
    """Low-pass h, bands k = 0..bands and the unresolved remainder."""

    bands: int

    def low(self, xi: Any) -> np.ndarray:
        return low_pass(xi)

    def band(self, k: int, xi: Any) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return low_pass(xi / 2.0 ** (k + 1)) - low_pass(xi / 2.0**k)

    def multiplier(self, k: int, xi: Any) -> np.ndarray:
        """Band multiplier with k = -1 meaning the low-pass."""
        return self.low(xi) if k == -1 else self.band(k, xi)

    def remainder(self, xi: Any) -> np.ndarray:
        return 1.0 - low_pass(np.asarray(xi, dtype=float) / 2.0 ** (self.bands + 1))

    def total(self, xi: Any) -> np.ndarray:
        """Sum of the low-pass and every band."""
        return self.low(xi) + sum(
            self.band(k, xi) for k in range(self.bands + 1)
        )

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(-1, self.bands + 1))

    @property
    def resolved_limit(self) -> float:
        """Frequencies below this are fully covered by the bands."""
        return LOW_PASS_PLATEAU * 2.0 ** (self.bands + 1)

    def annulus(self, k: int) -> tuple[float, float]:
        if k == -1:
            return 0.0, LOW_PASS_SUPPORT
        return BAND_INNER * 2.0**k, BAND_OUTER * 2.0**k


def build_dyadic_partition(bands: int) -> DyadicPartition:
    """Return the multiplier family for bands 0..bands."""
    if bands < 1:
        message = f"Dyadic partition needs at least one band, got {bands}"
        raise InvalidInputError(message)
    return DyadicPartition(bands)


def max_bands(grid: Grid) -> int:
    """Largest band index whose annulus stays below the grid Nyquist frequency."""
    return int(np.floor(np.log2(grid.nyquist / BAND_OUTER)))


@dataclass(frozen=True, eq=False)
class BandDecomposition:
    """Band components, their lifted densities and the high-frequency rest."""

    label: str
    grid: Grid
    partition: DyadicPartition
    components: tuple[np.ndarray, ...]
    lifted: tuple[np.ndarray, ...]
    remainder: np.ndarray

    @property
    def indices(self) -> tuple[int, ...]:
        return self.partition.indices

    @property
    def scales(self) -> tuple[float, ...]:
        return tuple(2.0 ** (-k) for k in self.indices)

    def component(self, k: int) -> np.ndarray:
        return self.components[k + 1]

    def reconstruct(self) -> np.ndarray:
        return np.sum(self.components, axis=0) + self.remainder


def _spectrum(function: TestFunction) -> np.ndarray:
    return np.fft.rfft(function.grid_values)


def _synthesize(spectrum: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.irfft(spectrum, n=grid.size)


def _lift(k: int, xi: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """e^{2^-k |xi|} on the band support, zero elsewhere."""
    lift = np.zeros_like(xi)
    inside = multiplier > 0.0
    lift[inside] = np.exp(2.0 ** (-k) * xi[inside])
    return lift


def decompose(function: TestFunction, bands: int) -> BandDecomposition:
    """Split a grid function into Littlewood-Paley bands."""
    grid = function.grid
    partition = build_dyadic_partition(bands)
    limit = max_bands(grid)
    if bands > limit:
        message = (
            f"{bands} bands exceed the Nyquist limit of this grid "
            f"(N=2^{grid.exponent}, L={grid.half_width}); at most {limit}"
        )
        raise InvalidInputError(message)
    xi = grid.frequencies
    spectrum = _spectrum(function)
    components, lifted = [], []
    for k in partition.indices:
        multiplier = partition.multiplier(k, xi)
        band = multiplier * spectrum
        components.append(_synthesize(band, grid))
        lifted.append(_synthesize(_lift(k, xi, multiplier) * band, grid))
    LOGGER.debug("Decomposed %s into %d bands", function.label, bands + 2)
    return BandDecomposition(
        label=function.label,
        grid=grid,
        partition=partition,
        components=tuple(components),
        lifted=tuple(lifted),
        remainder=_synthesize(partition.remainder(xi) * spectrum, grid),
    )


def l2_norm(values: np.ndarray, grid: Grid) -> float:
    return float(np.sqrt(np.sum(values**2) * grid.spacing))


def sup_norm(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def besov_norm(
    target: TestFunction | BandDecomposition, s: float, flavor: str = FLAVOR_B22
) -> float:
    """B^s_{2,2} or B^s_{inf,inf} norm from the band components."""
    if flavor not in BESOV_FLAVORS:
        message = f"Unknown Besov flavor: {flavor}"
        raise InvalidInputError(message)
    decomposition = (
        target
        if isinstance(target, BandDecomposition)
        else decompose(target, max_bands(target.grid))
    )
    weights = [2.0 ** (k * s) for k in decomposition.indices]
    if flavor == FLAVOR_B22:
        return float(
            np.sqrt(
                sum(
                    (weight * l2_norm(component, decomposition.grid)) ** 2
                    for weight, component in zip(
                        weights, decomposition.components, strict=True
                    )
                )
            )
        )
    return max(
        weight * sup_norm(component)
        for weight, component in zip(weights, decomposition.components, strict=True)
    )


def hs_norm(function: TestFunction, s: float) -> float:
    """Sobolev norm with the Bessel weight (1 + xi^2)^s, straight from the FFT."""
    grid = function.grid
    spectrum = _spectrum(function)
    weight = (1.0 + grid.frequencies**2) ** s * np.abs(spectrum) ** 2
    # rfft keeps each nonzero frequency once, except Nyquist
    weight[1 : (grid.size + 1) // 2] *= 2.0
    return float(np.sqrt(np.sum(weight) * grid.spacing / grid.size))


def band_norms(decomposition: BandDecomposition) -> list[dict[str, float]]:
    """Per-band L2 and sup norms."""
    return [
        {
            "k": k,
            "l2": l2_norm(component, decomposition.grid),
            "sup": sup_norm(component),
            "lifted_l2": l2_norm(lifted, decomposition.grid),
            "lifted_sup": sup_norm(lifted),
        }
        for k, component, lifted in zip(
            decomposition.indices,
            decomposition.components,
            decomposition.lifted,
            strict=True,
        )
    ]


def poisson_smooth(function: TestFunction, eta: float) -> TestFunction:
    """Apply the Poisson multiplier exp(-eta |xi|)."""
    if eta <= 0.0:
        message = f"Poisson smoothing needs eta > 0, got {eta}"
        raise InvalidInputError(message)
    grid = function.grid
    smoothed = _synthesize(np.exp(-eta * grid.frequencies) * _spectrum(function), grid)
    return function.with_samples(f"{function.label}_poisson_{eta:g}", smoothed)


def high_freq_cutoff(function: TestFunction, cutoff: int) -> TestFunction:
    """S_M phi: the sum of bands k <= M - 1, with S_0 the low-pass."""
    if cutoff < 0:
        message = f"Cutoff index must be nonnegative, got {cutoff}"
        raise InvalidInputError(message)
    grid = function.grid
    multiplier = low_pass(grid.frequencies / 2.0**cutoff)
    truncated = _synthesize(multiplier * _spectrum(function), grid)
    return function.with_samples(f"{function.label}_cutoff_{cutoff}", truncated)


def export_decomposition_csv(decomposition: BandDecomposition, path: Path) -> None:
    """Columns x, phi(x) and one column per band."""
    header = ["x", "phi", *(f"phi_{k}" for k in decomposition.indices), "rest"]
    total = decomposition.reconstruct()
    columns = [
        decomposition.grid.nodes,
        total,
        *decomposition.components,
        decomposition.remainder,
    ]
    write_csv(path, header, zip(*columns, strict=True))


def export_band_norms_csv(decomposition: BandDecomposition, path: Path) -> None:
    rows = band_norms(decomposition)
    header = list(rows[0]) if rows else []
    write_csv(path, header, ([row[key] for key in header] for row in rows))
