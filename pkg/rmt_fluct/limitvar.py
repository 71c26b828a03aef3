"""Limiting variance functionals of linear eigenvalue statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Final

import numpy as np
import scipy.fft
import scipy.integrate

from .const import (
    DEFAULT_CHEBYSHEV_TERMS,
    DEFAULT_QUADRATURE_NODES,
    FAMILIES,
    FAMILY_GOE,
    FAMILY_GUE,
    FAMILY_JOHANSSON,
    FAMILY_WIGNER,
    LIMIT_METHODS,
    LOGGER,
    METHOD_QUADRATURE,
)
from .exceptions import InvalidInputError, NumericalError
from .functions import TestFunction
from .quadrature import graded_rule, grading_levels

if TYPE_CHECKING:
    from collections.abc import Callable

DCT_POINTS: Final = 2**16
TAIL_INCREMENT: Final = 1e-12
DOUBLING_TOLERANCE: Final = 1e-6
DIFFERENCE_STEP: Final = 1e-6
REGULARITY_RATIO: Final = 0.9
PANEL_ORDER: Final = 16

FAMILY_EDGE: Final = {
    FAMILY_GUE: 2.0,
    FAMILY_GOE: 2.0,
    FAMILY_WIGNER: 2.0,
    FAMILY_JOHANSSON: math.sqrt(2.0),
}
FAMILY_FACTOR: Final = {
    FAMILY_GUE: 1.0,
    FAMILY_GOE: 2.0,
    FAMILY_WIGNER: 1.0,
    FAMILY_JOHANSSON: 1.0,
}


@dataclass(frozen=True)
class LimitVarianceRequest:
    """What to evaluate and how."""

    function: TestFunction
    family: str = FAMILY_GUE
    kappa4: float = 0.0
    w2: float = 2.0
    method: str = METHOD_QUADRATURE

    def __post_init__(self) -> None:
        """Validate family and method."""
        if self.family not in FAMILIES:
            message = f"Unknown ensemble family: {self.family}"
            raise InvalidInputError(message)
        if self.method not in LIMIT_METHODS:
            message = f"Unknown limit variance method: {self.method}"
            raise InvalidInputError(message)

    @property
    def edge(self) -> float:
        return FAMILY_EDGE[self.family]


@dataclass
class ChebyshevReport:
    """Class for holding a Chebyshev evaluation and its tail diagnostics."""

    label: str
    family: str
    value: float
    coefficients: np.ndarray
    octave_sums: list[float] = field(default_factory=list)
    tail_estimate: float = 0.0
    tail_ratio: float | None = None
    terms: int = 0
    regularity_flag: bool = False

    @property
    def fingerprint(self) -> np.ndarray:
        """The sequence k c_k^2 whose decay tracks regularity."""
        k = np.arange(len(self.coefficients))
        return k * self.coefficients**2


def _derivative(function: TestFunction, x: np.ndarray) -> np.ndarray:
    """Symmetric difference quotient, kept clear of breakpoints."""
    step = np.full_like(x, DIFFERENCE_STEP)
    for point in function.breakpoints:
        step = np.minimum(step, 0.25 * np.abs(x - point))
    step = np.maximum(step, 1e-12)
    return (function.evaluate(x + step) - function.evaluate(x - step)) / (2.0 * step)


def _angular_singularities(function: TestFunction, edge: float) -> list[float]:
    return sorted(
        math.acos(point / edge)
        for point in function.breakpoints
        if -edge < point < edge
    )


def _double_integral(function: TestFunction, edge: float, nodes: int) -> float:
    """(1/4 pi^2) double integral of D^2 (a^2 - xy) over [0, pi]^2 in angles."""
    singular = _angular_singularities(function, edge)
    theta, weight = graded_rule(
        0.0,
        math.pi,
        panels=max(1, nodes // PANEL_ORDER),
        singular=singular,
        levels=grading_levels(nodes) if singular else 0,
        order=PANEL_ORDER,
    )
    x = edge * np.cos(theta)
    values = function.evaluate(x)
    difference = x[:, np.newaxis] - x[np.newaxis, :]
    np.fill_diagonal(difference, 1.0)
    quotient = (values[:, np.newaxis] - values[np.newaxis, :]) / difference
    np.fill_diagonal(quotient, _derivative(function, x))
    integrand = quotient**2 * (edge**2 - np.outer(x, x))
    if not np.all(np.isfinite(integrand)):
        i, j = np.argwhere(~np.isfinite(integrand))[0]
        cell = (float(theta[i]), float(theta[j]))
        message = (
            f"Non-finite limit variance integrand for {function.label} "
            f"at angles {cell}"
        )
        raise NumericalError(message, cell=cell)
    return float(weight @ integrand @ weight) / (4.0 * math.pi**2)


def limit_variance_quadrature(
    request: LimitVarianceRequest,
    *,
    nodes: int = DEFAULT_QUADRATURE_NODES,
    check: bool = True,
) -> float:
    """Double-integral form in the angular variables."""
    function = request.function
    value = _double_integral(function, request.edge, nodes)
    if check:
        refined = _double_integral(function, request.edge, 2 * nodes)
        delta = abs(refined - value)
        if delta > DOUBLING_TOLERANCE * (1.0 + abs(refined)):
            LOGGER.warning(
                "Limit variance of %s moved by %.3e under node doubling",
                function.label,
                delta,
            )
        value = refined
    value *= FAMILY_FACTOR[request.family]
    if request.family == FAMILY_WIGNER:
        value += _wigner_correction(function, request.kappa4, request.w2)
    if value < 0.0:
        LOGGER.warning(
            "Negative limit variance %.6g for %s, reporting 0", value, function.label
        )
    return max(value, 0.0)


def chebyshev_coefficients(
    function: TestFunction,
    terms: int = DEFAULT_CHEBYSHEV_TERMS,
    *,
    edge: float = 2.0,
    points: int = DCT_POINTS,
) -> np.ndarray:
    """c_k = (2/pi) int_0^pi phi(a cos t) cos(kt) dt for k < terms."""
    if terms > points:
        message = f"Cannot compute {terms} coefficients from {points} points"
        raise InvalidInputError(message)
    theta = math.pi * (np.arange(points) + 0.5) / points
    samples = function.evaluate(edge * np.cos(theta))
    return scipy.fft.dct(samples, type=2)[:terms] / points


def chebyshev_report(
    function: TestFunction,
    family: str = FAMILY_GUE,
    terms: int = DEFAULT_CHEBYSHEV_TERMS,
) -> ChebyshevReport:
    """Chebyshev series value with octave tail diagnostics."""
    if family not in FAMILIES:
        message = f"Unknown ensemble family: {family}"
        raise InvalidInputError(message)
    coefficients = chebyshev_coefficients(function, terms, edge=FAMILY_EDGE[family])
    increments = 0.25 * np.arange(terms) * coefficients**2
    significant = np.nonzero(increments > TAIL_INCREMENT)[0]
    used = int(significant[-1]) + 1 if significant.size else 1
    octaves = [
        float(np.sum(increments[2**j : min(2 ** (j + 1), terms)]))
        for j in range(int(math.log2(terms)))
    ]
    report = ChebyshevReport(
        label=function.label,
        family=family,
        value=float(np.sum(increments[:used])),
        coefficients=coefficients,
        octave_sums=octaves,
        terms=used,
    )
    tail = [s for s in octaves[-3:] if s > TAIL_INCREMENT]
    if len(tail) >= 2:  # noqa: PLR2004
        ratio = (tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1))
        report.tail_ratio = ratio
        if ratio >= REGULARITY_RATIO:
            report.regularity_flag = True
            LOGGER.warning(
                "Regularity below threshold for %s: octave ratio %.3f",
                function.label,
                ratio,
            )
        else:
            report.tail_estimate = tail[-1] * ratio / (1.0 - ratio)
    report.value = (report.value + report.tail_estimate) * FAMILY_FACTOR[family]
    return report


def limit_variance_chebyshev(function: TestFunction, family: str = FAMILY_GUE) -> float:
    """(1/4) sum k c_k^2, doubled for GOE."""
    return chebyshev_report(function, family).value


def _edge_weighted_integral(
    integrand: Callable[[float], float], breakpoints: tuple[float, ...]
) -> float:
    """Integral of f(x) / sqrt(4 - x^2) over [-2, 2] by QUADPACK."""
    cuts = [-2.0, *sorted(p for p in breakpoints if -2.0 < p < 2.0), 2.0]  # noqa: PLR2004
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:], strict=True):
        left, right = a == cuts[0], b == cuts[-1]

        def piece(x: float, *, left: bool = left, right: bool = right) -> float:
            scale = 1.0 if left else 1.0 / math.sqrt(x + 2.0)
            if not right:
                scale /= math.sqrt(2.0 - x)
            return integrand(x) * scale

        result, _ = scipy.integrate.quad(
            piece,
            a,
            b,
            weight="alg",
            wvar=(-0.5 if left else 0.0, -0.5 if right else 0.0),
            epsabs=1e-13,
            epsrel=1e-12,
            limit=200,
        )
        total += result
    return total


def wigner_linear_integrals(
    function: TestFunction, *, direct: bool = False
) -> tuple[float, float]:
    """Integrals of phi (2 - x^2) and phi x (2 - x^2) against 1/sqrt(4 - x^2).

    The angular route reads them off -pi c_2 and -pi (c_1 + c_3); the direct
    route integrates in x with the endpoint weight handled by QUADPACK.
    """
    if direct:

        def even(x: float) -> float:
            return float(function.evaluate(x)) * (2.0 - x * x)

        def odd(x: float) -> float:
            return even(x) * x

        return (
            _edge_weighted_integral(even, function.breakpoints),
            _edge_weighted_integral(odd, function.breakpoints),
        )
    singular = _angular_singularities(function, 2.0)
    theta, weight = graded_rule(
        0.0,
        math.pi,
        panels=64,
        singular=singular,
        levels=grading_levels(DEFAULT_QUADRATURE_NODES) if singular else 0,
    )
    values = function.evaluate(2.0 * np.cos(theta))
    c1, c2, c3 = (
        2.0 / math.pi * float(np.sum(weight * values * np.cos(k * theta)))
        for k in (1, 2, 3)
    )
    return -math.pi * c2, -math.pi * (c1 + c3)


def _wigner_correction(function: TestFunction, kappa4: float, w2: float) -> float:
    even, odd = wigner_linear_integrals(function)
    return (kappa4 * even**2 + (w2 - 2.0) * odd**2) / (4.0 * math.pi**2)


def limit_variance(request: LimitVarianceRequest) -> float:
    """Dispatch on method; adds the fourth-cumulant terms for general Wigner."""
    if request.method == METHOD_QUADRATURE:
        return limit_variance_quadrature(request)
    value = limit_variance_chebyshev(request.function, request.family)
    if request.family == FAMILY_WIGNER:
        value += _wigner_correction(request.function, request.kappa4, request.w2)
    if value < 0.0:
        LOGGER.warning(
            "Negative limit variance %.6g for %s, reporting 0",
            value,
            request.function.label,
        )
    return max(value, 0.0)


def limit_variance_general_wigner(
    function: TestFunction,
    kappa4: float,
    w2: float,
    method: str = METHOD_QUADRATURE,
) -> float:
    """GUE part plus the kappa4 and w2 corrections.

    The w2 term is (w2 - 2) times the squared odd integral over 4 pi^2, so it
    vanishes at w2 = 2 rather than at the ensemble default w2 = 1. With
    kappa4 = 0 and w2 = 1, phi(x) = x gets 1 - 1 = 0. Negative totals are
    clipped to 0 with a warning.
    """
    return limit_variance(
        LimitVarianceRequest(function, FAMILY_WIGNER, kappa4, w2, method)
    )


def limit_variance_johansson(
    function: TestFunction, method: str = METHOD_QUADRATURE
) -> float:
    """Deformed-GUE variance with spectral edge sqrt(2)."""
    return limit_variance(LimitVarianceRequest(function, FAMILY_JOHANSSON, method=method))
