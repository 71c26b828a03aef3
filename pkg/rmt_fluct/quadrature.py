"""Composite Gauss-Legendre rules with geometric grading."""

from __future__ import annotations

from functools import cache
from typing import TYPE_CHECKING, Final

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Iterable

GRADING_RATIO: Final = 0.25
PANEL_ORDER: Final = 16


@cache
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _panel_edges(
    left: float,
    right: float,
    panels: int,
    grade_left: bool,
    grade_right: bool,
    levels: int,
) -> list[float]:
    """Uniform panel edges, refined geometrically toward flagged endpoints."""
    edges = list(np.linspace(left, right, max(panels, 1) + 1))
    width = edges[1] - edges[0]
    if grade_left and levels:
        inner = [left + width * GRADING_RATIO**j for j in range(levels, 0, -1)]
        edges = [edges[0], *inner, *edges[1:]]
    if grade_right and levels:
        inner = [right - width * GRADING_RATIO**j for j in range(1, levels + 1)]
        edges = [*edges[:-1], *inner, edges[-1]]
    return edges


def graded_rule(
    left: float,
    right: float,
    *,
    panels: int,
    breakpoints: Iterable[float] = (),
    singular: Iterable[float] = (),
    levels: int = 0,
    order: int = PANEL_ORDER,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on [left, right].

    Panels never straddle a breakpoint. Points listed in ``singular`` get
    ``levels`` geometrically shrinking panels on both sides. The uniform panel
    budget is shared out in proportion to interval length.
    """
    singular_points = {float(s) for s in singular if left <= s <= right}
    cuts = sorted(
        {left, right}
        | {float(b) for b in breakpoints if left < b < right}
        | {s for s in singular_points if left < s < right}
    )
    total = right - left
    nodes: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    reference_nodes, reference_weights = _reference_rule(order)
    for a, b in zip(cuts[:-1], cuts[1:], strict=True):
        count = max(1, round(panels * (b - a) / total))
        edges = _panel_edges(
            a, b, count, a in singular_points, b in singular_points, levels
        )
        for lo, hi in zip(edges[:-1], edges[1:], strict=True):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (reference_nodes + 1.0))
            weights.append(half * reference_weights)
    return np.concatenate(nodes), np.concatenate(weights)


def grading_levels(nodes: int) -> int:
    """Number of graded panels matched to a node budget."""
    return max(2, 2 * int(np.log2(max(nodes, 4))) - 10)
