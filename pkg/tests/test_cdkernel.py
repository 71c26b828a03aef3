"""The tests for the cdkernel file."""

import math
from pathlib import Path

import numpy as np
import pytest

from rmt_fluct.cdkernel import (
    bulk_asymptotics_check,
    counting_variance,
    counting_variance_fit,
    counting_variance_projection,
    exact_variance,
    exact_variance_projection,
    hermite_functions,
    kernel_diagonal,
    kernel_eval,
    kernel_grid,
    kernel_half_width,
)
from rmt_fluct.const import COUNTING_SLOPE
from rmt_fluct.exceptions import InvalidInputError
from rmt_fluct.functions import get_function
from rmt_fluct.limitvar import LimitVarianceRequest, limit_variance
from rmt_fluct.output import read_csv
from rmt_fluct.quadrature import graded_rule


def _rule(n: int, panels: int = 200) -> tuple[np.ndarray, np.ndarray]:
    half_width = kernel_half_width(n)
    return graded_rule(-half_width, half_width, panels=panels)


def test_hermite_orthonormal() -> None:
    """Test the Hermite functions are orthonormal in the spectral scale."""
    nodes, weights = _rule(12)
    basis = hermite_functions(12, nodes)
    np.testing.assert_allclose((basis * weights) @ basis.T, np.eye(12), atol=1e-10)


@pytest.mark.parametrize("n", [10, 50, 300], ids=("10", "50", "300"))
def test_diagonal_integrates_to_n(n: int) -> None:
    """Test the one-point density integrates to n."""
    nodes, weights = _rule(n, panels=400)
    assert weights @ kernel_diagonal(n, nodes) == pytest.approx(n, rel=1e-9)


def test_bulk_density() -> None:
    """Test K_n(0, 0) / n against the semicircle density."""
    assert kernel_diagonal(200, 0.0)[0] / 200 == pytest.approx(1.0 / math.pi, rel=0.01)


def test_kernel_symmetry_and_reproduction() -> None:
    """Test K(x, y) = K(y, x) and the reproducing property."""
    n = 30
    assert kernel_eval(n, 0.3, -0.5) == pytest.approx(kernel_eval(n, -0.5, 0.3))
    nodes, weights = _rule(n, panels=300)
    reproduced = weights @ (kernel_eval(n, 0.3, nodes) * kernel_eval(n, nodes, -0.5))
    assert reproduced == pytest.approx(kernel_eval(n, 0.3, -0.5), abs=1e-9)
    assert kernel_eval(n, 0.4, 0.4) == pytest.approx(float(kernel_diagonal(n, 0.4)[0]))


def test_kernel_grid(tmp_path: Path) -> None:
    """Test the tensor grid and its CSV."""
    grid = kernel_grid(20, [-1.0, 0.0, 0.5])
    np.testing.assert_allclose(grid.values, grid.values.T)
    np.testing.assert_allclose(np.diag(grid.values), kernel_diagonal(20, grid.nodes))
    grid.to_csv(tmp_path / "kernel.csv")
    header, rows = read_csv(tmp_path / "kernel.csv")
    assert header == ["x", "-1.0", "0.0", "0.5"]
    assert len(rows) == 3


def test_degree_limits() -> None:
    """Test degrees outside the stable range."""
    with pytest.raises(InvalidInputError):
        kernel_diagonal(0, 0.0)
    with pytest.raises(InvalidInputError):
        kernel_diagonal(2001, 0.0)


def test_exact_variance_linear() -> None:
    """Test Var Tr H = 1 for the GUE."""
    assert exact_variance(50, get_function("x")) == pytest.approx(1.0, abs=1e-4)
    assert exact_variance_projection(50, get_function("x")) == pytest.approx(
        1.0, abs=1e-6
    )


def test_exact_variance_routes() -> None:
    """Test the kernel and projection routes agree for a smooth entry."""
    function = get_function("bump")
    value = exact_variance(60, function)
    assert value == pytest.approx(exact_variance_projection(60, function), rel=1e-5)


def test_counting_variance_routes() -> None:
    """Test the kernel and projection routes for the counting variance."""
    assert counting_variance(40, 0.0) == pytest.approx(
        counting_variance_projection(40, 0.0), rel=1e-4
    )
    assert counting_variance_projection(40, 5.0) == 0.0


def test_counting_variance_fit() -> None:
    """Test recovering a log n slope."""
    ns = [100, 200, 400, 800]
    values = [0.3 + COUNTING_SLOPE * math.log(n) for n in ns]
    fit = counting_variance_fit(ns, values)
    assert fit.slope == pytest.approx(COUNTING_SLOPE)
    assert fit.intercept == pytest.approx(0.3)
    assert fit.relative_error == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(InvalidInputError):
        counting_variance_fit([100], [0.5])


def test_bulk_asymptotics(caplog: pytest.LogCaptureFixture) -> None:
    """Test the local bulk diagnostics."""
    check = bulk_asymptotics_check(200, 0.3)
    assert check.in_bulk
    assert check.smoothed_ratio == pytest.approx(1.0, abs=0.02)
    assert 0.5 <= check.oscillation_ratio <= 1.5
    edge = bulk_asymptotics_check(200, 1.9)
    assert not edge.in_bulk
    assert edge.smoothed_ratio is None
    assert "outside the bulk" in caplog.text


def test_edge_decay() -> None:
    """Test the one-point density vanishes past the edge."""
    bulk, outside = kernel_diagonal(200, [0.0, 2.2])
    assert outside <= 1e-3 * bulk


def test_exact_variance_approaches_limit() -> None:
    """Test the finite-n variance of a bump converges to the limit."""
    function = get_function("bump")
    limit = limit_variance(LimitVarianceRequest(function))
    gaps = [abs(exact_variance(n, function) - limit) for n in (20, 40, 80)]
    assert gaps[1] < gaps[0]
    assert gaps[2] < gaps[0]
    assert gaps[2] <= 0.05 * limit


def test_counting_variance_parity() -> None:
    """Test the counting variance is even in the threshold."""
    assert counting_variance(40, 0.7) == pytest.approx(
        counting_variance(40, -0.7), abs=1e-6
    )


@pytest.mark.parametrize("threshold", [3.0, -3.0], ids=("above", "below"))
def test_counting_variance_outside(threshold: float) -> None:
    """Test a threshold past the spectrum gives no fluctuation."""
    assert counting_variance(40, threshold) <= 1e-4
