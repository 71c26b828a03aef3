"""Correlation kernel of a fixed matrix plus a small GUE.

M = H + G where H has eigenvalues z (radius-1 semicircle scale) and G has
density proportional to exp(-2n tr G^2). The kernel is the double contour
integral

    K(x, y) = 4n / (2 pi i)^2  oint_gamma ds  int_Gamma dw
              exp(n f_y(w) - n f_x(s)) / (w - s),

f_x(w) = 2 (w^2 - 2 x w) + (1/n) sum_j log(w - z_j), gamma a rectangle around
the z_j traversed counterclockwise and Gamma an upward vertical line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Final

import numpy as np

from .const import DEFAULT_CONTOUR_MAX_N, DEFAULT_CONTOUR_NODES, LOGGER
from .ensembles import (
    sample_gue_tridiagonal,
    semicircle_quantiles,
    semicircle_stieltjes,
)
from .exceptions import ConvergenceError, InvalidInputError, NumericalError
from .quadrature import PANEL_ORDER, graded_rule

SOURCE_SAMPLED: Final = "sampled"
SOURCE_SEMICIRCLE: Final = "semicircle"
FORM_SEPARATED: Final = "separated"
FORM_CROSSING: Final = "crossing"
CONTOUR_FORMS: Final = (FORM_SEPARATED, FORM_CROSSING)

SPECTRAL_EDGE: Final = math.sqrt(2.0)
EDGE_FLAG_FACTOR: Final = 1.2
EDGE_FLAG_MIN_N: Final = 200
ADMISSIBLE_DELTA: Final = 0.05
CONTRACTION_ITERATIONS: Final = 100
MAX_SADDLE_ITERATIONS: Final = 500
SADDLE_TOLERANCE: Final = 1e-12
PHASE_CLEARANCE: Final = 1e-14
POLE_CLEARANCE: Final = 1e-10
DOUBLING_TOLERANCE: Final = 1e-3
LOCAL_LAW_CONSTANT: Final = 10.0
LINE_DECAY: Final = 30.0
TWO_PI_I_SQUARED: Final = (2j * math.pi) ** 2


@dataclass(frozen=True, eq=False)
class DeformationData:
    """Sorted eigenvalues z of the fixed part."""

    z: np.ndarray
    source: str

    def __post_init__(self) -> None:
        """Sort and flag spectra reaching past the expected edge."""
        object.__setattr__(self, "z", np.sort(np.asarray(self.z, dtype=float)))
        if self.n >= EDGE_FLAG_MIN_N and self.edge_flag:
            LOGGER.warning(
                "Deformation spectrum reaches %.4f, beyond %.4f",
                self.max_abs,
                SPECTRAL_EDGE * EDGE_FLAG_FACTOR,
            )

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.z)))

    @property
    def edge_flag(self) -> bool:
        return self.max_abs > SPECTRAL_EDGE * EDGE_FLAG_FACTOR


def semicircle_deformation(n: int) -> DeformationData:
    """Classical locations of the radius-1 semicircle."""
    return DeformationData(semicircle_quantiles(n, radius=1.0), SOURCE_SEMICIRCLE)


def sampled_deformation(n: int, seed: int, trial: int) -> DeformationData:
    """Eigenvalues of W / (2 sqrt(n)) for a GUE matrix W."""
    sample = sample_gue_tridiagonal(n, seed, trial)
    return DeformationData(sample.canonical() / 2.0, SOURCE_SAMPLED)


@dataclass
class LocalLawRow:
    """Class for holding one local law spot check."""

    w: complex
    deviation: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.bound


def local_law_check(data: DeformationData, points: Any) -> list[LocalLawRow]:
    """|m_n(w) - m_sc(w)| against 10 / (n Im w)."""
    rows = []
    for w in np.atleast_1d(np.asarray(points, dtype=complex)):
        if w.imag <= 0.0:
            message = f"Local law spot checks need Im w > 0, got {w}"
            raise InvalidInputError(message)
        empirical = complex(np.mean(1.0 / (data.z - w)))
        reference = complex(semicircle_stieltjes(w, radius=1.0))
        rows.append(
            LocalLawRow(
                w=complex(w),
                deviation=abs(empirical - reference),
                bound=LOCAL_LAW_CONSTANT / (data.n * w.imag),
            )
        )
    return rows


def _as_z(z: DeformationData | Any) -> np.ndarray:
    if isinstance(z, DeformationData):
        return z.z
    return np.atleast_1d(np.asarray(z, dtype=float))


def _log_sum(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_j log(w - z_j), principal branch per term."""
    distance = w[:, np.newaxis] - z[np.newaxis, :]
    closest = np.min(np.abs(distance), axis=1)
    if np.any(closest < PHASE_CLEARANCE):
        point = complex(w[np.argmin(closest)])
        message = f"Phase evaluated at {point}, on top of a deformation eigenvalue"
        raise InvalidInputError(message)
    return np.sum(np.log(distance), axis=1)


def phase_eval(x: float, z: DeformationData | Any, w: Any) -> complex | np.ndarray:
    """f_x(w) = 2 (w^2 - 2 x w) + (1/n) sum_j log(w - z_j)."""
    values = _as_z(z)
    points = np.atleast_1d(np.asarray(w, dtype=complex))
    phase = 2.0 * (points**2 - 2.0 * x * points) + _log_sum(values, points) / len(
        values
    )
    return complex(phase[0]) if np.ndim(w) == 0 else phase


def phase_derivative(x: float, z: DeformationData | Any, w: Any) -> complex:
    """f_x'(w) = 4w - 4x + (1/n) sum_j 1/(w - z_j)."""
    values = _as_z(z)
    w = complex(w)
    return 4.0 * w - 4.0 * x + complex(np.mean(1.0 / (w - values)))


@dataclass
class SaddlePair:
    """Class for holding the upper saddle point and how it was found."""

    x: float
    s_plus: complex
    iterations: int
    residual: float
    method: str = "contraction"

    @property
    def s_minus(self) -> complex:
        return self.s_plus.conjugate()


def admissible_limit(n: int) -> float:
    """Largest |x| for which the saddle analysis applies."""
    return SPECTRAL_EDGE - n ** (-1.0 / 3.0 + ADMISSIBLE_DELTA)


def limiting_saddle(x: float) -> complex:
    """Upper saddle for the semicircle deformation at n = infinity."""
    return complex(0.75 * x, 0.25 * math.sqrt(max(2.0 - x * x, 0.0)))


def find_saddle(
    x: float, z: DeformationData | Any, *, check_range: bool = True
) -> SaddlePair:
    """Upper root of f_x' by contraction, then damped Newton if needed."""
    values = _as_z(z)
    n = len(values)
    if check_range and abs(x) > admissible_limit(n):
        message = (
            f"x = {x} is outside the admissible range |x| <= "
            f"{admissible_limit(n):.4f} for n = {n}"
        )
        raise InvalidInputError(message)

    def residual(s: complex) -> complex:
        return 4.0 * s - 4.0 * x + complex(np.mean(1.0 / (s - values)))

    s = limiting_saddle(x)
    trail = [s]
    for iteration in range(1, CONTRACTION_ITERATIONS + 1):
        s = x - 0.25 * complex(np.mean(1.0 / (s - values)))
        trail.append(s)
        if abs(residual(s)) <= SADDLE_TOLERANCE and s.imag > 0.0:
            return SaddlePair(x, s, iteration, abs(residual(s)))

    iteration = CONTRACTION_ITERATIONS
    if s.imag <= 0.0:
        s = limiting_saddle(x)
    while iteration < MAX_SADDLE_ITERATIONS:
        iteration += 1
        g = residual(s)
        slope = 4.0 - complex(np.mean(1.0 / (s - values) ** 2))
        step = g / slope
        damping = 1.0
        while damping > 1e-6:  # noqa: PLR2004
            candidate = s - damping * step
            if candidate.imag > 0.0 and abs(residual(candidate)) < abs(g):
                break
            damping /= 2.0
        s = candidate
        trail.append(s)
        if abs(residual(s)) <= SADDLE_TOLERANCE:
            return SaddlePair(x, s, iteration, abs(residual(s)), "newton")

    message = (
        f"Saddle search at x = {x} did not converge in "
        f"{MAX_SADDLE_ITERATIONS} iterations"
    )
    raise ConvergenceError(message, trail=trail)


def saddle_separation(x: float, y: float, z: DeformationData | Any) -> float:
    """Distance between the saddles at x and at y."""
    if x == y:
        return 0.0
    return abs(find_saddle(x, z).s_plus - find_saddle(y, z).s_plus)


@dataclass
class ContourSpec:
    """Class for holding both contours as nodes and complex weights."""

    form: str
    half_width: float
    height: float
    abscissa: float
    gamma_nodes: np.ndarray
    gamma_weights: np.ndarray
    line_nodes: np.ndarray
    line_weights: np.ndarray
    crossing_height: float = field(default=0.0)

    @property
    def node_counts(self) -> tuple[int, int]:
        return len(self.gamma_nodes), len(self.line_nodes)


def _line_extent(height: float, n: int) -> float:
    return math.sqrt(height**2 + LINE_DECAY / n) + 0.2


def _rectangle_gl(
    left: float, right: float, height: float, center: float, nodes: int
) -> tuple[np.ndarray, np.ndarray]:
    panels = max(1, nodes // PANEL_ORDER)
    t, wt = graded_rule(left, right, panels=panels, breakpoints=(center,))
    u, wu = graded_rule(-height, height, panels=max(1, panels // 4))
    points = [t - 1j * height, right + 1j * u, t[::-1] + 1j * height, left + 1j * u[::-1]]
    weights = [wt, 1j * wu, -wt[::-1], -1j * wu[::-1]]
    return np.concatenate(points), np.concatenate(weights)


def _line_gl(
    abscissa: float, height: float, extent: float, nodes: int
) -> tuple[np.ndarray, np.ndarray]:
    tau, weight = graded_rule(
        -extent,
        extent,
        panels=max(1, nodes // PANEL_ORDER),
        breakpoints=(-height, 0.0, height),
    )
    return abscissa + 1j * tau, 1j * weight


def _midpoints(start: float, cells: int, step: float) -> np.ndarray:
    return start + step * (np.arange(cells) + 0.5)


def place_contours(
    x: float,
    y: float,
    data: DeformationData,
    *,
    nodes: int = DEFAULT_CONTOUR_NODES,
    form: str = FORM_SEPARATED,
) -> ContourSpec:
    """Rectangle through the saddle at x, vertical line through the saddle at y."""
    if form not in CONTOUR_FORMS:
        message = f"Unknown contour form: {form}"
        raise InvalidInputError(message)
    s_plus = find_saddle(x, data).s_plus
    w_plus = s_plus if y == x else find_saddle(y, data).s_plus
    half_width = data.max_abs + 1.0
    height = s_plus.imag
    abscissa = w_plus.real
    extent = _line_extent(max(height, w_plus.imag), data.n)
    if form == FORM_SEPARATED:
        gamma, gamma_weights = _rectangle_gl(
            -half_width, half_width, height, s_plus.real, nodes
        )
        line, line_weights = _line_gl(abscissa, w_plus.imag, extent, nodes)
        return ContourSpec(
            form, half_width, height, abscissa, gamma, gamma_weights, line, line_weights
        )

    # Equal steps, cell edges at the crossings abscissa +- i height.
    cells = 2 * max(1, round(height * nodes / (2.0 * half_width)))
    step = 2.0 * height / cells
    left = abscissa - math.ceil((abscissa + half_width) / step) * step
    right = abscissa + math.ceil((half_width - abscissa) / step) * step
    across = round((right - left) / step)
    t = _midpoints(left, across, step)
    u = _midpoints(-height, cells, step)
    gamma = np.concatenate(
        [t - 1j * height, right + 1j * u, t[::-1] + 1j * height, left + 1j * u[::-1]]
    )
    gamma_weights = np.concatenate(
        [
            np.full(across, step, dtype=complex),
            np.full(cells, 1j * step),
            np.full(across, -step, dtype=complex),
            np.full(cells, -1j * step),
        ]
    )
    beyond = math.ceil((extent - height) / step)
    reach = height + beyond * step
    tau = _midpoints(-reach, round(2.0 * reach / step), step)
    return ContourSpec(
        form,
        right,
        height,
        abscissa,
        gamma,
        gamma_weights,
        abscissa + 1j * tau,
        np.full(len(tau), 1j * step),
        crossing_height=height,
    )


@dataclass
class KernelEvaluation:
    """Class for holding a contour evaluation of the kernel.

    value is the gauge-dependent one-sided K(x, y); product and diagonal are
    the gauge-invariant quantities.
    """

    n: int
    x: float
    y: float
    form: str
    nodes: int
    value: complex
    relative_delta: float
    product: complex | None = None

    @property
    def is_diagonal(self) -> bool:
        return self.x == self.y

    @property
    def diagonal(self) -> float | None:
        return self.value.real if self.is_diagonal else None


def _check_clearance(points: np.ndarray, z: np.ndarray) -> None:
    distance = np.min(np.abs(points[:, np.newaxis] - z[np.newaxis, :]))
    if distance < POLE_CLEARANCE:
        message = f"Contour passes within {distance:.3e} of a deformation eigenvalue"
        raise NumericalError(message)


def _weighted_exponentials(
    exponent: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, float]:
    shift = float(np.max(exponent.real))
    return weights * np.exp(exponent - shift), shift


def _gauge(n: int, u: float, omega: float) -> float:
    """Log of the factor e^{2n u^2 + omega u} the gauge attaches to u."""
    return 2.0 * n * u * u + omega * u


def _integrands(
    x: float, y: float, z: np.ndarray, spec: ContourSpec, omega: float
) -> tuple[np.ndarray, float, np.ndarray, float]:
    """Weighted line and loop factors, gauged by e^{g(x) - g(y)}."""
    n = len(z)
    w, s = spec.line_nodes, spec.gamma_nodes
    line, line_shift = _weighted_exponentials(
        2.0 * n * (w**2 - 2.0 * y * w) + _log_sum(z, w) - _gauge(n, y, omega),
        spec.line_weights,
    )
    loop, loop_shift = _weighted_exponentials(
        -2.0 * n * (s**2 - 2.0 * x * s) - _log_sum(z, s) + _gauge(n, x, omega),
        spec.gamma_weights,
    )
    return line, line_shift, loop, loop_shift


def _separated(
    x: float, y: float, z: np.ndarray, spec: ContourSpec, omega: float
) -> complex:
    n = len(z)
    w, s = spec.line_nodes, spec.gamma_nodes
    line, line_shift, loop, loop_shift = _integrands(x, y, z, spec, omega)
    line_poles = 1.0 / (w[:, np.newaxis] - z[np.newaxis, :])
    loop_poles = 1.0 / (s[:, np.newaxis] - z[np.newaxis, :])
    line_total, line_by_pole = line.sum(), line @ line_poles
    if x == y:
        # d/dx of the separable numerator at y = x
        loop_total = 4.0 * n * np.sum(loop * s)
        loop_by_pole = 4.0 * n * ((loop * s) @ loop_poles)
        scale = 1.0
    else:
        loop_total, loop_by_pole = loop.sum(), loop @ loop_poles
        scale = 1.0 / (x - y)
    numerator = line_by_pole @ loop_by_pole - 4.0 * n * line_total * loop_total
    return complex(
        math.exp(line_shift + loop_shift) * scale * numerator / TWO_PI_I_SQUARED
    )


def _crossing(
    x: float, y: float, z: np.ndarray, spec: ContourSpec, omega: float
) -> complex:
    n = len(z)
    w, s = spec.line_nodes, spec.gamma_nodes
    line, line_shift, loop, loop_shift = _integrands(x, y, z, spec, omega)
    total = 0.0j
    block = 256
    for start in range(0, len(w), block):
        rows = slice(start, start + block)
        total += line[rows] @ (1.0 / (w[rows, np.newaxis] - s[np.newaxis, :])) @ loop
    # Residue picked up on the part of Gamma inside gamma.
    top = complex(spec.abscissa, spec.crossing_height)
    if x == y:
        residue = 2j * spec.crossing_height
    else:
        rate = 4.0 * n * (x - y)
        gauge = _gauge(n, x, omega) - _gauge(n, y, omega)
        residue = (
            np.exp(rate * top + gauge) - np.exp(rate * top.conjugate() + gauge)
        ) / rate
    double = math.exp(line_shift + loop_shift) * total
    return complex(4.0 * n * (double + 2j * math.pi * residue) / TWO_PI_I_SQUARED)


def _evaluate_once(
    x: float, y: float, data: DeformationData, nodes: int, form: str, omega: float
) -> complex:
    spec = place_contours(x, y, data, nodes=nodes, form=form)
    _check_clearance(spec.gamma_nodes, data.z)
    _check_clearance(spec.line_nodes, data.z)
    evaluate = _separated if form == FORM_SEPARATED else _crossing
    return evaluate(x, y, data.z, spec, omega)


def _converged(
    x: float,
    y: float,
    data: DeformationData,
    nodes: int,
    form: str,
    omega: float = 0.0,
) -> tuple[complex, float]:
    coarse = _evaluate_once(x, y, data, nodes, form, omega)
    fine = _evaluate_once(x, y, data, 2 * nodes, form, omega)
    delta = abs(fine - coarse) / max(abs(fine), np.finfo(float).tiny)
    if not math.isfinite(delta) or delta > DOUBLING_TOLERANCE:
        message = (
            f"Contour quadrature at (x, y) = ({x}, {y}) did not converge "
            f"under node doubling (relative delta {delta:.3e})"
        )
        raise ConvergenceError(message, delta=delta, trail=[coarse, fine])
    return fine, delta


def kernel_contour(
    n: int,
    x: float,
    y: float,
    z: DeformationData,
    *,
    nodes: int = DEFAULT_CONTOUR_NODES,
    form: str = FORM_SEPARATED,
    omega: float = 0.0,
) -> KernelEvaluation:
    """Diagonal value, or the one-sided value and the product K(x, y) K(y, x)."""
    if n != z.n:
        message = f"Dimension {n} does not match {z.n} deformation eigenvalues"
        raise InvalidInputError(message)
    if n > DEFAULT_CONTOUR_MAX_N:
        message = f"Contour evaluation is capped at n = {DEFAULT_CONTOUR_MAX_N}"
        raise InvalidInputError(message)
    if form not in CONTOUR_FORMS:
        message = f"Unknown contour form: {form}"
        raise InvalidInputError(message)
    if x == y:
        value, delta = _converged(x, x, z, nodes, form, omega)
        return KernelEvaluation(n, x, y, form, nodes, complex(value.real, 0.0), delta)
    forward, forward_delta = _converged(x, y, z, nodes, form, omega)
    backward, backward_delta = _converged(y, x, z, nodes, form, omega)
    return KernelEvaluation(
        n,
        x,
        y,
        form,
        nodes,
        forward,
        max(forward_delta, backward_delta),
        product=forward * backward,
    )


@dataclass
class SweepRow:
    """Class for holding one row of a kernel diagnostics table."""

    n: int
    x: float
    y: float
    diagonal_ratio: float | None = None
    scaled_product: float | None = None
    saddle_residual: float | None = None
    saddle_drift: float | None = None


def semicircle_density_sqrt2(x: float) -> float:
    return math.sqrt(max(2.0 - x * x, 0.0)) / math.pi


def diagonal_ratio_sweep(
    data: DeformationData,
    points: Any,
    *,
    nodes: int = DEFAULT_CONTOUR_NODES,
    form: str = FORM_SEPARATED,
) -> list[SweepRow]:
    """K(x, x) / (n rho(x)) at each point."""
    rows = []
    for x in np.atleast_1d(np.asarray(points, dtype=float)):
        evaluation = kernel_contour(
            data.n, float(x), float(x), data, nodes=nodes, form=form
        )
        saddle = find_saddle(float(x), data)
        rows.append(
            SweepRow(
                n=data.n,
                x=float(x),
                y=float(x),
                diagonal_ratio=evaluation.value.real
                / (data.n * semicircle_density_sqrt2(float(x))),
                saddle_residual=saddle.residual,
                saddle_drift=abs(saddle.s_plus - limiting_saddle(float(x))),
            )
        )
        LOGGER.debug("Diagonal ratio at x=%s: %s", x, rows[-1].diagonal_ratio)
    return rows


def product_bound_sweep(
    data: DeformationData, points: Any, *, nodes: int = DEFAULT_CONTOUR_NODES
) -> list[SweepRow]:
    """|K(x, y) K(y, x)| (x - y)^2 over well-separated pairs."""
    grid = np.atleast_1d(np.asarray(points, dtype=float))
    gap = data.n ** (-0.9)
    rows = []
    for i, x in enumerate(grid):
        for y in grid[i + 1 :]:
            if abs(x - y) < gap:
                continue
            evaluation = kernel_contour(data.n, float(x), float(y), data, nodes=nodes)
            rows.append(
                SweepRow(
                    n=data.n,
                    x=float(x),
                    y=float(y),
                    scaled_product=abs(evaluation.product) * (x - y) ** 2,
                )
            )
    return rows
