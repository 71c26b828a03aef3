"""Test-function corpus."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cache, cached_property
from typing import TYPE_CHECKING, Any, Final

import numpy as np

from .const import (
    DEFAULT_GRID_EXPONENT,
    DEFAULT_GRID_HALF_WIDTH,
    GROUP_ALL,
    GROUP_HOLDER,
    GROUP_INDICATOR,
    GROUP_SMOOTH,
)
from .exceptions import InvalidInputError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

CLASS_SMOOTH: Final = "smooth"
CLASS_SOBOLEV: Final = "sobolev"
CLASS_HOLDER: Final = "holder"
CLASS_INDICATOR: Final = "indicator"

WINDOW_INNER: Final = 2.5
WINDOW_OUTER: Final = 4.0
HOLDER_EXPONENTS: Final = (0.4, 0.6, 0.8)
CUSP_CENTER: Final = 0.7
CUSP_EXPONENT: Final = 0.75
SMOOTHED_INDICATOR_ETA: Final = 0.25


@dataclass(frozen=True)
class Grid:
    """Periodic grid on [-L, L) with N = 2**exponent points."""

    half_width: float = DEFAULT_GRID_HALF_WIDTH
    exponent: int = DEFAULT_GRID_EXPONENT

    def __post_init__(self) -> None:
        """Validate the grid."""
        if self.half_width < DEFAULT_GRID_HALF_WIDTH or self.exponent < 1:
            message = (
                f"Grid needs L >= {DEFAULT_GRID_HALF_WIDTH} and N a power of two, "
                f"got L={self.half_width}, N=2^{self.exponent}"
            )
            raise InvalidInputError(message)

    @property
    def size(self) -> int:
        return 2**self.exponent

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.size

    @property
    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.size)

    @property
    def frequencies(self) -> np.ndarray:
        """Nonnegative angular frequencies matching numpy.fft.rfft."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.size, d=self.spacing)

    @property
    def nyquist(self) -> float:
        return np.pi / self.spacing

    def refined(self, steps: int = 1) -> Grid:
        return replace(self, exponent=self.exponent + steps)


@dataclass(frozen=True)
class Regularity:
    """Declared regularity class of a test function."""

    kind: str
    exponent: float | None = None

    def __str__(self) -> str:
        """Return e.g. "holder 0.6"."""
        if self.exponent is None:
            return self.kind
        return f"{self.kind} {self.exponent:g}"


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Real function on the line with its periodized grid samples."""

    __test__ = False

    label: str
    rule: Callable[[np.ndarray], np.ndarray] | None
    regularity: Regularity
    breakpoints: tuple[float, ...] = ()
    grid: Grid = field(default_factory=Grid)
    samples: np.ndarray | None = None

    def __post_init__(self) -> None:
        """Require either a rule or grid samples."""
        if self.rule is None and self.samples is None:
            message = f"Test function {self.label} has neither rule nor samples"
            raise InvalidInputError(message)
        if self.samples is not None and len(self.samples) != self.grid.size:
            message = (
                f"Test function {self.label} has {len(self.samples)} samples "
                f"for a grid of {self.grid.size}"
            )
            raise InvalidInputError(message)

    def evaluate(self, x: Any) -> np.ndarray:
        """Evaluate on an array of reals."""
        points = np.asarray(x, dtype=float)
        if self.rule is not None:
            return np.broadcast_to(
                np.asarray(self.rule(points), dtype=float), points.shape
            ).copy()
        return np.interp(
            points,
            self.grid.nodes,
            self.grid_values,
            period=2.0 * self.grid.half_width,
        )

    __call__ = evaluate

    @cached_property
    def grid_values(self) -> np.ndarray:
        """Samples at the grid nodes."""
        if self.samples is not None:
            return self.samples
        return self.evaluate(self.grid.nodes)

    def on_grid(self, grid: Grid) -> TestFunction:
        """Same function sampled on another grid."""
        if self.rule is None:
            message = f"Test function {self.label} is only known on its grid"
            raise InvalidInputError(message)
        return replace(self, grid=grid)

    def with_samples(self, label: str, samples: np.ndarray) -> TestFunction:
        """Grid-only function sharing this one's grid."""
        return TestFunction(
            label=label,
            rule=None,
            regularity=self.regularity,
            breakpoints=self.breakpoints,
            grid=self.grid,
            samples=np.asarray(samples, dtype=float),
        )


def _flat(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    positive = t > 0.0
    out[positive] = np.exp(-1.0 / t[positive])
    return out


def smooth_step(t: Any) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    rising = _flat(t)
    return rising / (rising + _flat(1.0 - t))


def window(x: np.ndarray) -> np.ndarray:
    """Smooth cutoff equal to 1 on the spectral region."""
    return smooth_step((WINDOW_OUTER - np.abs(x)) / (WINDOW_OUTER - WINDOW_INNER))


def bump(x: np.ndarray) -> np.ndarray:
    """Compact bump on (-1, 1) with peak value 1."""
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


def poisson_kernel(x: Any, eta: float) -> np.ndarray:
    """P_eta(x) = eta / (pi (x^2 + eta^2))."""
    if eta <= 0.0:
        message = f"Poisson kernel needs eta > 0, got {eta}"
        raise InvalidInputError(message)
    x = np.asarray(x, dtype=float)
    return eta / (np.pi * (x**2 + eta**2))


def _abs_power(alpha: float) -> Callable[[np.ndarray], np.ndarray]:
    def rule(x: np.ndarray) -> np.ndarray:
        return np.abs(x) ** alpha * window(x)

    return rule


def _cusp(x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.abs(x - CUSP_CENTER) ** CUSP_EXPONENT)


def _indicator(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0.0, 1.0, 0.0) * window(x)


def _smoothed_indicator(x: np.ndarray) -> np.ndarray:
    step = 0.5 + np.arctan(x / SMOOTHED_INDICATOR_ETA) / np.pi
    return step * window(x)


@cache
def _corpus() -> tuple[TestFunction, ...]:
    smooth = Regularity(CLASS_SMOOTH)
    entries = [
        TestFunction("x", lambda x: x, smooth),
        TestFunction("x2", lambda x: x**2, smooth),
        TestFunction("bump", bump, smooth, breakpoints=(-1.0, 1.0)),
        TestFunction("gaussian", lambda x: np.exp(-(x**2)), smooth),
        TestFunction("sin3", lambda x: np.sin(3.0 * x) * window(x), smooth),
        TestFunction("smoothed_indicator", _smoothed_indicator, smooth),
        TestFunction(
            "tent",
            lambda x: np.maximum(0.0, 1.0 - np.abs(x)),
            Regularity(CLASS_SOBOLEV, 1.4),
            breakpoints=(-1.0, 0.0, 1.0),
        ),
        *(
            TestFunction(
                f"abs_pow_{alpha}",
                _abs_power(alpha),
                Regularity(CLASS_HOLDER, alpha),
                breakpoints=(0.0,),
            )
            for alpha in HOLDER_EXPONENTS
        ),
        TestFunction(
            "cusp",
            _cusp,
            Regularity(CLASS_HOLDER, CUSP_EXPONENT),
            breakpoints=(CUSP_CENTER - 1.0, CUSP_CENTER, CUSP_CENTER + 1.0),
        ),
        TestFunction(
            "indicator", _indicator, Regularity(CLASS_INDICATOR), breakpoints=(0.0,)
        ),
    ]
    return tuple(entries)


def corpus() -> list[TestFunction]:
    """Return the corpus spanning every regularity class."""
    return list(_corpus())


def get_function(label: str) -> TestFunction:
    """Look up a corpus entry by label."""
    for function in _corpus():
        if function.label == label:
            return function
    message = f"Unknown test function: {label}"
    raise InvalidInputError(message)


GROUP_CLASSES: Final = {
    GROUP_SMOOTH: (CLASS_SMOOTH,),
    GROUP_HOLDER: (CLASS_HOLDER,),
    GROUP_INDICATOR: (CLASS_INDICATOR,),
}


def expand_labels(labels: Iterable[str]) -> list[str]:
    """Expand group names into corpus labels."""
    expanded = set()
    for label in labels:
        if label == GROUP_ALL:
            expanded.update(function.label for function in _corpus())
        elif label in GROUP_CLASSES:
            expanded.update(
                function.label
                for function in _corpus()
                if function.regularity.kind in GROUP_CLASSES[label]
            )
        else:
            expanded.add(get_function(label).label)
    return sorted(expanded)


def indicator_at(threshold: float) -> TestFunction:
    """Unwindowed 1_[threshold, inf)."""
    return TestFunction(
        f"indicator_{threshold:g}",
        lambda x: np.where(x >= threshold, 1.0, 0.0),
        Regularity(CLASS_INDICATOR),
        breakpoints=(threshold,),
    )


def constant(value: float = 1.0) -> TestFunction:
    """Constant function."""
    return TestFunction(
        f"constant_{value:g}",
        lambda x: np.full_like(x, value, dtype=float),
        Regularity(CLASS_SMOOTH),
    )


def band_limited_tone(center: float, width: float, grid: Grid | None = None) -> TestFunction:
    """Wave packet whose spectrum is a bump on [center - width, center + width]."""
    grid = grid or Grid()
    if not 0.0 < width < center:
        message = f"Tone needs 0 < width < center, got width={width}, center={center}"
        raise InvalidInputError(message)
    spectrum = bump((grid.frequencies - center) / width).astype(complex)
    # center the packet at x = 0
    spectrum *= np.exp(-1j * grid.frequencies * grid.half_width)
    samples = np.fft.irfft(spectrum, n=grid.size)
    return TestFunction(
        f"tone_{center:g}",
        None,
        Regularity(CLASS_SMOOTH),
        grid=grid,
        samples=samples / np.max(np.abs(samples)),
    )
