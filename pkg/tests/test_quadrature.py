"""The tests for the quadrature file."""

import numpy as np
import pytest

from rmt_fluct.quadrature import graded_rule, grading_levels


def test_polynomials_exact() -> None:
    """Test a composite rule integrates polynomials exactly."""
    nodes, weights = graded_rule(-1.0, 2.0, panels=3, breakpoints=(0.5,))
    assert np.sum(weights) == pytest.approx(3.0)
    assert weights @ nodes**7 == pytest.approx((2.0**8 - 1.0) / 8.0)


def test_breakpoints_split_panels() -> None:
    """Test no panel straddles a breakpoint."""
    nodes, weights = graded_rule(0.0, 1.0, panels=4, breakpoints=(0.3,))
    indicator = np.where(nodes >= 0.3, 1.0, 0.0)
    assert weights @ indicator == pytest.approx(0.7, abs=1e-14)


def test_graded_singularity() -> None:
    """Test grading toward an endpoint singularity."""
    plain, plain_weights = graded_rule(0.0, 1.0, panels=4)
    nodes, weights = graded_rule(0.0, 1.0, panels=4, singular=(0.0,), levels=10)
    exact = 2.0 / 3.0
    graded_error = abs(weights @ np.sqrt(nodes) - exact)
    assert graded_error < 1e-9
    assert graded_error < abs(plain_weights @ np.sqrt(plain) - exact)
    assert np.min(nodes) < 1e-6


@pytest.mark.parametrize(
    ("nodes", "levels"),
    [(4, 2), (512, 8), (2048, 12)],
    ids=("floor", "default", "fine"),
)
def test_grading_levels(nodes: int, levels: int) -> None:
    """Test the level count matched to a node budget."""
    assert grading_levels(nodes) == levels
