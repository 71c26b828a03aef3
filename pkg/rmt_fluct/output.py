"""CSV and SVG emission."""

from __future__ import annotations

import csv
import html
import math
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Any, Final

import numpy as np

from .const import DOMAIN, LOGGER

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence
    from pathlib import Path

TIMESTAMP_PREFIX: Final = "# generated"
SVG_WIDTH: Final = 640
SVG_HEIGHT: Final = 400
SVG_MARGIN: Final = 50
SVG_COLORS: Final = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def format_cell(value: Any) -> str:
    """Render one value deterministically."""
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a table with a leading timestamp comment line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S")
    with path.open("w", encoding="utf-8", newline="") as file:
        file.write(f"{TIMESTAMP_PREFIX} by {DOMAIN} at {timestamp} UTC\r\n")
        writer = csv.writer(file)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])
    LOGGER.debug("Wrote %s", path)


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    """Read a table written by write_csv."""
    with path.open(encoding="utf-8", newline="") as file:
        reader = csv.reader(line for line in file if not line.startswith("#"))
        header = next(reader, [])
        return header, list(reader)


def csv_body(path: Path) -> str:
    """File content without the timestamp line."""
    return "".join(
        line
        for line in path.read_text(encoding="utf-8").splitlines(keepends=True)
        if not line.startswith(TIMESTAMP_PREFIX)
    )


class _Canvas:
    """Map data coordinates onto a fixed SVG viewport."""

    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float]) -> None:
        """Initialize the canvas."""
        self._x0, self._x1 = x_range
        self._y0, self._y1 = y_range
        if self._x1 <= self._x0:
            self._x1 = self._x0 + 1.0
        if self._y1 <= self._y0:
            self._y1 = self._y0 + 1.0
        self.elements: list[str] = []

    def x(self, value: float) -> float:
        span = SVG_WIDTH - 2 * SVG_MARGIN
        return SVG_MARGIN + span * (value - self._x0) / (self._x1 - self._x0)

    def y(self, value: float) -> float:
        span = SVG_HEIGHT - 2 * SVG_MARGIN
        return SVG_HEIGHT - SVG_MARGIN - span * (value - self._y0) / (self._y1 - self._y0)

    def axes(self, title: str, x_label: str, y_label: str) -> None:
        left, bottom = SVG_MARGIN, SVG_HEIGHT - SVG_MARGIN
        right, top = SVG_WIDTH - SVG_MARGIN, SVG_MARGIN
        self.elements.extend(
            [
                f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
                f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
                f'<text x="{SVG_WIDTH / 2}" y="{top / 2}" text-anchor="middle">'
                f"{html.escape(title)}</text>",
                f'<text x="{SVG_WIDTH / 2}" y="{SVG_HEIGHT - 10}" text-anchor="middle">'
                f"{html.escape(x_label)}</text>",
                f'<text x="15" y="{SVG_HEIGHT / 2}" text-anchor="middle" '
                f'transform="rotate(-90 15 {SVG_HEIGHT / 2})">{html.escape(y_label)}</text>',
            ]
        )
        for fraction in (0.0, 0.5, 1.0):
            xv = self._x0 + fraction * (self._x1 - self._x0)
            yv = self._y0 + fraction * (self._y1 - self._y0)
            self.elements.append(
                f'<text x="{self.x(xv):.1f}" y="{bottom + 15}" font-size="10" '
                f'text-anchor="middle">{xv:.3g}</text>'
            )
            self.elements.append(
                f'<text x="{left - 5}" y="{self.y(yv):.1f}" font-size="10" '
                f'text-anchor="end">{yv:.3g}</text>'
            )

    def polyline(self, xs: Sequence[float], ys: Sequence[float], color: str) -> None:
        points = " ".join(
            f"{self.x(a):.2f},{self.y(b):.2f}"
            for a, b in zip(xs, ys, strict=True)
            if math.isfinite(b)
        )
        self.elements.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    def render(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        body = "\n".join(self.elements)
        path.write_text(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
            f'height="{SVG_HEIGHT}">\n{body}\n</svg>\n',
            encoding="utf-8",
        )
        LOGGER.debug("Wrote %s", path)


def histogram_svg(
    values: np.ndarray,
    density: Callable[[np.ndarray], np.ndarray],
    path: Path,
    title: str,
    bins: int = 40,
) -> None:
    """Histogram of values against a reference density curve."""
    counts, edges = np.histogram(values, bins=bins, density=True)
    grid = np.linspace(edges[0], edges[-1], 200)
    curve = density(grid)
    canvas = _Canvas(
        (float(edges[0]), float(edges[-1])),
        (0.0, float(max(counts.max(initial=0.0), curve.max(initial=0.0))) * 1.1),
    )
    canvas.axes(title, "value", "density")
    for height, left, right in zip(counts, edges[:-1], edges[1:], strict=True):
        x0, x1 = canvas.x(float(left)), canvas.x(float(right))
        y0, y1 = canvas.y(float(height)), canvas.y(0.0)
        canvas.elements.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
            f'height="{y1 - y0:.2f}" fill="#c6dbef" stroke="#6baed6"/>'
        )
    canvas.polyline(grid.tolist(), curve.tolist(), SVG_COLORS[1])
    canvas.render(path)


def line_plot_svg(
    xs: Sequence[float],
    series: dict[str, Sequence[float]],
    path: Path,
    title: str,
    x_label: str = "n",
) -> None:
    """One polyline per series, legend in the top right corner."""
    finite = [v for values in series.values() for v in values if math.isfinite(v)]
    canvas = _Canvas(
        (float(min(xs)), float(max(xs))),
        (min(finite, default=0.0), max(finite, default=1.0)),
    )
    canvas.axes(title, x_label, "value")
    for index, (label, values) in enumerate(series.items()):
        color = SVG_COLORS[index % len(SVG_COLORS)]
        canvas.polyline(xs, values, color)
        canvas.elements.append(
            f'<text x="{SVG_WIDTH - SVG_MARGIN}" y="{SVG_MARGIN + 15 * index}" '
            f'fill="{color}" font-size="11" text-anchor="end">{html.escape(label)}</text>'
        )
    canvas.render(path)
