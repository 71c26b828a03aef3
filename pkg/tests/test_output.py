"""The tests for the output file."""

from pathlib import Path

import numpy as np
import scipy.stats
from freezegun import freeze_time

from rmt_fluct.output import (
    csv_body,
    format_cell,
    histogram_svg,
    line_plot_svg,
    read_csv,
    write_csv,
)


def test_format_cell() -> None:
    """Test deterministic cell rendering."""
    assert format_cell(None) == ""
    assert format_cell(True) == "true"  # noqa: FBT003
    assert format_cell(np.bool_(False)) == "false"  # noqa: FBT003
    assert format_cell(np.int64(7)) == "7"
    assert format_cell(0.1) == "0.1"
    assert format_cell(np.float64(1 / 3)) == repr(1 / 3)
    assert format_cell("gue") == "gue"


@freeze_time("2024-03-01 12:30:00")
def test_write_csv(tmp_path: Path) -> None:
    """Test the timestamp line and the table."""
    path = tmp_path / "nested" / "table.csv"
    write_csv(path, ["n", "value"], [[1, 0.5], [2, None]])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# generated by rmt_fluct at 2024-03-01 12:30:00 UTC"
    assert lines[1:] == ["n,value", "1,0.5", "2,"]
    assert read_csv(path) == (["n", "value"], [["1", "0.5"], ["2", ""]])


def test_csv_body_ignores_timestamp(tmp_path: Path) -> None:
    """Test reruns at different times have the same body."""
    with freeze_time("2024-03-01"):
        write_csv(tmp_path / "a.csv", ["x"], [[1.25]])
    with freeze_time("2025-07-09"):
        write_csv(tmp_path / "b.csv", ["x"], [[1.25]])
    assert (tmp_path / "a.csv").read_text() != (tmp_path / "b.csv").read_text()
    assert csv_body(tmp_path / "a.csv") == csv_body(tmp_path / "b.csv")


def test_svg(tmp_path: Path) -> None:
    """Test the figures are written."""
    values = scipy.stats.norm.rvs(size=500, random_state=1)
    histogram_svg(values, scipy.stats.norm.pdf, tmp_path / "hist.svg", "N & M")
    line_plot_svg(
        [100, 200, 400],
        {"bump": [0.1, 0.11, float("nan")], "x2": [2.0, 2.0, 2.0]},
        tmp_path / "plot.svg",
        "Var <phi>",
    )
    histogram = (tmp_path / "hist.svg").read_text(encoding="utf-8")
    assert histogram.startswith("<svg")
    assert histogram.count("<rect") == 40
    assert "N &amp; M" in histogram
    plot = (tmp_path / "plot.svg").read_text(encoding="utf-8")
    assert plot.count("<polyline") == 2
    assert "Var &lt;phi&gt;" in plot
