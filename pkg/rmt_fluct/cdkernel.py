"""Finite-n GUE kernel machinery.

Hermite functions are orthonormal on the line and mapped to the spectral
scale of an n x n GUE matrix, psi_k(x) = (n/2)^(1/4) h_k(x sqrt(n/2)), so the
kernel K_n(x, x) / n approaches the semicircle density on [-2, 2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Final

import numpy as np
import scipy.stats

from .const import (
    COUNTING_SLOPE,
    DEFAULT_KERNEL_HALF_WIDTH,
    DEFAULT_KERNEL_NODES,
    LOGGER,
)
from .ensembles import semicircle_density
from .exceptions import ConvergenceError, InvalidInputError, NumericalError
from .functions import CLASS_HOLDER, CLASS_SOBOLEV, TestFunction, indicator_at
from .output import write_csv
from .quadrature import PANEL_ORDER, graded_rule, grading_levels

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

MAX_DEGREE: Final = 2000
RESCALE: Final = 1e150
LOG_RESCALE: Final = math.log(RESCALE)
DIAGONAL_GAP: Final = 1e-7
NODES_PER_UNIT: Final = 2.2
DOUBLING_TOLERANCE: Final = 1e-5
BLOCK_ROWS: Final = 512
BULK_MARGIN: Final = 0.2
BULK_WINDOW: Final = 10.0
BULK_SAMPLES: Final = 2001


def kernel_half_width(n: int) -> float:
    """Numerical support of K_n: [-2.8, 2.8] or wider for small n."""
    return max(DEFAULT_KERNEL_HALF_WIDTH, 2.0 + 8.0 * n ** (-2.0 / 3.0))


def _check_degree(n: int) -> None:
    if not 1 <= n <= MAX_DEGREE:
        message = f"Kernel degree must be in [1, {MAX_DEGREE}], got {n}"
        raise InvalidInputError(message)


def _unscale(mantissa: np.ndarray, log_scale: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        magnitude = np.exp(np.log(np.abs(mantissa)) + log_scale)
    return np.sign(mantissa) * magnitude


def _recurrence(
    count: int, u: np.ndarray, *, keep_all: bool
) -> tuple[list[np.ndarray], np.ndarray]:
    """Orthonormal Hermite functions h_0..h_count at u, exponent tracked.

    Returns the values of every h_k (keep_all) or of h_{count-2..count}.
    """
    log_scale = -0.5 * u**2 - 0.25 * math.log(math.pi)
    before = np.zeros_like(u)
    previous = np.zeros_like(u)
    current = np.ones_like(u)
    rows = []
    for k in range(count):
        if keep_all:
            rows.append(_unscale(current, log_scale))
        upcoming = (
            math.sqrt(2.0 / (k + 1)) * u * current - math.sqrt(k / (k + 1)) * previous
        )
        before, previous, current = previous, current, upcoming
        large = np.abs(current) > RESCALE
        if np.any(large):
            current[large] /= RESCALE
            previous[large] /= RESCALE
            before[large] /= RESCALE
            log_scale[large] += LOG_RESCALE
    if keep_all:
        return rows, log_scale
    return [_unscale(m, log_scale) for m in (before, previous, current)], log_scale


def _checked(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        message = f"Overflow in the Hermite recurrence while computing {what}"
        raise NumericalError(message)
    return values


def hermite_functions(
    count: int, x: Any, scale_n: int | None = None
) -> np.ndarray:
    """Rows psi_0..psi_{count-1} at x in the spectral scale of dimension scale_n."""
    scale_n = scale_n or count
    _check_degree(max(count, scale_n))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = x * math.sqrt(scale_n / 2.0)
    rows, _ = _recurrence(count, u, keep_all=True)
    table = np.stack(rows) * (scale_n / 2.0) ** 0.25
    return _checked(table, f"psi_0..psi_{count - 1}")


@dataclass
class HermiteTop:
    """Class for holding psi_{n-1}, psi_n and their derivatives."""

    n: int
    x: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    lower_derivative: np.ndarray
    upper_derivative: np.ndarray


def hermite_top(n: int, x: Any) -> HermiteTop:
    """The pair entering the Christoffel-Darboux formula at dimension n."""
    _check_degree(n)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    root = math.sqrt(n / 2.0)
    u = x * root
    h_before, h_lower, h_upper = _recurrence(n, u, keep_all=False)[0]
    # h_k' = -u h_k + sqrt(2k) h_{k-1}
    d_lower = -u * h_lower + math.sqrt(2.0 * (n - 1)) * h_before
    d_upper = -u * h_upper + math.sqrt(2.0 * n) * h_lower
    factor = (n / 2.0) ** 0.25
    return HermiteTop(
        n=n,
        x=x,
        lower=_checked(factor * h_lower, f"psi_{n - 1}"),
        upper=_checked(factor * h_upper, f"psi_{n}"),
        lower_derivative=_checked(factor * root * d_lower, f"psi_{n - 1}'"),
        upper_derivative=_checked(factor * root * d_upper, f"psi_{n}'"),
    )


def hermite_psi(k: int, x: Any, scale_n: int) -> np.ndarray:
    """Single Hermite function psi_k in the scale of dimension scale_n."""
    _check_degree(max(k, scale_n))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = x * math.sqrt(scale_n / 2.0)
    _, _, h = _recurrence(k, u, keep_all=False)[0]
    return _checked((scale_n / 2.0) ** 0.25 * h, f"psi_{k}")


def kernel_diagonal(n: int, x: Any) -> np.ndarray:
    """K_n(x, x) from the derivative form."""
    top = hermite_top(n, x)
    return top.upper_derivative * top.lower - top.upper * top.lower_derivative


def _kernel_block(
    x: np.ndarray,
    y: np.ndarray,
    x_top: HermiteTop,
    y_top: HermiteTop,
    diagonal: np.ndarray,
) -> np.ndarray:
    """K_n on the tensor grid x by y, diagonal taken at the row point."""
    difference = x[:, np.newaxis] - y[np.newaxis, :]
    numerator = np.outer(x_top.upper, y_top.lower) - np.outer(
        x_top.lower, y_top.upper
    )
    close = np.abs(difference) < DIAGONAL_GAP
    with np.errstate(divide="ignore", invalid="ignore"):
        block = numerator / difference
    return np.where(close, diagonal[:, np.newaxis], block)


def kernel_eval(n: int, x: Any, y: Any) -> np.ndarray | float:
    """Christoffel-Darboux kernel K_n(x, y), broadcasting x against y."""
    x_arr, y_arr = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    )
    flat_x, flat_y = x_arr.ravel(), y_arr.ravel()
    x_top, y_top = hermite_top(n, flat_x), hermite_top(n, flat_y)
    numerator = x_top.upper * y_top.lower - x_top.lower * y_top.upper
    difference = flat_x - flat_y
    diagonal = (
        y_top.upper_derivative * y_top.lower - y_top.upper * y_top.lower_derivative
    )
    close = np.abs(difference) < DIAGONAL_GAP
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(close, diagonal, numerator / difference)
    values = values.reshape(x_arr.shape)
    return float(values) if values.ndim == 0 else values


@dataclass
class KernelGrid:
    """Class for holding K_n on a tensor grid."""

    n: int
    nodes: np.ndarray
    values: np.ndarray

    def to_csv(self, path: Path) -> None:
        """Matrix CSV with the nodes as first row and column."""
        rows = (
            [node, *row] for node, row in zip(self.nodes, self.values, strict=True)
        )
        write_csv(path, ["x", *(repr(float(v)) for v in self.nodes)], rows)


def kernel_grid(n: int, nodes: Any) -> KernelGrid:
    """Evaluate K_n on nodes x nodes."""
    nodes = np.asarray(nodes, dtype=float)
    top = hermite_top(n, nodes)
    diagonal = top.upper_derivative * top.lower - top.upper * top.lower_derivative
    values = _kernel_block(nodes, nodes, top, top, diagonal)
    return KernelGrid(n=n, nodes=nodes, values=0.5 * (values + values.T))


def _variance_rule(
    n: int, function: TestFunction, level: int
) -> tuple[np.ndarray, np.ndarray]:
    half_width = kernel_half_width(n)
    panels = max(
        DEFAULT_KERNEL_NODES // PANEL_ORDER,
        math.ceil(NODES_PER_UNIT * n * 2.0 * half_width / PANEL_ORDER),
    ) * 2**level
    graded = function.regularity.kind in (CLASS_HOLDER, CLASS_SOBOLEV)
    return graded_rule(
        -half_width,
        half_width,
        panels=panels,
        breakpoints=function.breakpoints,
        singular=function.breakpoints if graded else (),
        levels=grading_levels(panels * PANEL_ORDER) if graded else 0,
    )


def _variance_sum(n: int, function: TestFunction, level: int) -> float:
    nodes, weights = _variance_rule(n, function, level)
    values = function.evaluate(nodes)
    if np.ptp(values) == 0.0:
        return 0.0
    top = hermite_top(n, nodes)
    diagonal = top.upper_derivative * top.lower - top.upper * top.lower_derivative
    total = 0.0
    for start in range(0, len(nodes), BLOCK_ROWS):
        rows = slice(start, start + BLOCK_ROWS)
        row_top = HermiteTop(
            n,
            nodes[rows],
            top.lower[rows],
            top.upper[rows],
            top.lower_derivative[rows],
            top.upper_derivative[rows],
        )
        block = _kernel_block(nodes[rows], nodes, row_top, top, diagonal[rows])
        jump = values[rows, np.newaxis] - values[np.newaxis, :]
        total += float(weights[rows] @ (jump**2 * block**2) @ weights)
        LOGGER.debug("Exact variance n=%d: rows %d of %d", n, start, len(nodes))
    if not math.isfinite(total):
        message = f"Non-finite exact variance integrand for {function.label}, n={n}"
        raise NumericalError(message, cell=(n, level))
    return 0.5 * total


def exact_variance(
    n: int, function: TestFunction, *, tolerance: float = DOUBLING_TOLERANCE
) -> float:
    """(1/2) double integral of (phi(x) - phi(y))^2 K_n(x, y)^2."""
    _check_degree(n)
    coarse = _variance_sum(n, function, 0)
    fine = _variance_sum(n, function, 1)
    delta = abs(fine - coarse)
    if delta > tolerance * max(abs(fine), 1e-6):
        message = (
            f"Exact variance of {function.label} at n={n} did not converge "
            f"under node doubling (delta {delta:.3e})"
        )
        raise ConvergenceError(message, delta=delta, trail=[coarse, fine])
    return max(fine, 0.0)


def counting_variance(n: int, threshold: float) -> float:
    """Variance of the number of eigenvalues above the threshold."""
    return exact_variance(n, indicator_at(threshold))


def _projection_rule(
    n: int, left: float, right: float, breakpoints: Sequence[float] = ()
) -> tuple[np.ndarray, np.ndarray]:
    panels = max(32, math.ceil(4.0 * n * (right - left) / PANEL_ORDER))
    return graded_rule(left, right, panels=panels, breakpoints=breakpoints)


def exact_variance_projection(n: int, function: TestFunction) -> float:
    """tr(B_{phi^2}) - ||B_phi||_F^2 with B_phi the Gram matrix of phi."""
    half_width = kernel_half_width(n)
    nodes, weights = _projection_rule(n, -half_width, half_width, function.breakpoints)
    values = function.evaluate(nodes)
    basis = hermite_functions(n, nodes, scale_n=n)
    gram = (basis * (weights * values)) @ basis.T
    trace = float(np.sum((basis**2) @ (weights * values**2)))
    return max(trace - float(np.sum(gram**2)), 0.0)


def counting_variance_projection(n: int, threshold: float) -> float:
    """tr(A - A^2) with A_jk the integral of psi_j psi_k above the threshold."""
    half_width = kernel_half_width(n)
    if threshold >= half_width or threshold <= -half_width:
        return 0.0
    nodes, weights = _projection_rule(n, threshold, half_width)
    basis = hermite_functions(n, nodes, scale_n=n)
    gram = (basis * weights) @ basis.T
    return max(float(np.trace(gram) - np.sum(gram**2)), 0.0)


@dataclass
class CountingFit:
    """Class for holding a log-n regression of counting variances."""

    slope: float
    intercept: float
    stderr: float
    reference: float = COUNTING_SLOPE

    @property
    def relative_error(self) -> float:
        return abs(self.slope - self.reference) / self.reference


def counting_variance_fit(
    ns: Sequence[int], values: Sequence[float]
) -> CountingFit:
    """Least-squares slope of the variance against log n."""
    if len(ns) != len(values) or len(ns) < 2:  # noqa: PLR2004
        message = "Need at least two (n, variance) pairs of equal length"
        raise InvalidInputError(message)
    fit = scipy.stats.linregress(np.log(np.asarray(ns, dtype=float)), values)
    return CountingFit(
        slope=float(fit.slope), intercept=float(fit.intercept), stderr=float(fit.stderr)
    )


@dataclass
class BulkDiagnostic:
    """Class for holding the local diagonal and oscillation checks."""

    n: int
    x: float
    in_bulk: bool
    smoothed_ratio: float | None = None
    oscillation_ratio: float | None = None


def bulk_asymptotics_check(n: int, x: float) -> BulkDiagnostic:
    """Smoothed K_n(x, x) / (n rho) and the relative oscillation of psi_n^2."""
    if abs(x) > 2.0 - BULK_MARGIN:
        LOGGER.warning("Point %s is outside the bulk, skipping the check", x)
        return BulkDiagnostic(n=n, x=x, in_bulk=False)
    offsets = np.linspace(-0.5 * BULK_WINDOW / n, 0.5 * BULK_WINDOW / n, BULK_SAMPLES)
    points = x + offsets
    diagonal = kernel_diagonal(n, points)
    density = semicircle_density(points)
    squared = hermite_psi(n, points, scale_n=n) ** 2
    local_mean = float(np.mean(squared))
    return BulkDiagnostic(
        n=n,
        x=x,
        in_bulk=True,
        smoothed_ratio=float(np.mean(diagonal) / (n * np.mean(density))),
        oscillation_ratio=float(0.5 * np.ptp(squared) / local_mean),
    )
