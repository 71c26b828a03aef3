"""The tests for the resolvent file."""

import logging
import math
from pathlib import Path

import numpy as np
import pytest

from rmt_fluct.const import ENSEMBLE_GUE
from rmt_fluct.coordinator import SpectrumPool, build_pool
from rmt_fluct.ensembles import EnsembleSpec
from rmt_fluct.exceptions import InvalidInputError
from rmt_fluct.output import read_csv
from rmt_fluct.resolvent import (
    REGION_BULK,
    REGION_OUTSIDE,
    SpectralPoint,
    energy_integrated_variance,
    export_var_trace_csv,
    local_law_deviation,
    msc,
    rigidity_deviation,
    stieltjes_empirical,
    trace_resolvent,
    var_trace_sweep,
    variance_bound_integral,
)

from .conftest import POOL_N, POOL_TRIALS


def _small_pool(pool: SpectrumPool, trials: int) -> SpectrumPool:
    return SpectrumPool(pool.spec, pool.seed, pool.eigenvalues[:trials])


def test_spectral_point() -> None:
    """Test the point validation and regions."""
    assert SpectralPoint(0.5, 0.1).z == complex(0.5, 0.1)
    assert SpectralPoint(0.5, 0.1).region == REGION_BULK
    assert SpectralPoint(7.0, 0.1).region == REGION_OUTSIDE
    assert SpectralPoint(0.0, 20.0).region == REGION_OUTSIDE
    for eta in (0.0, -1.0):
        with pytest.raises(InvalidInputError):
            SpectralPoint(0.0, eta)
    with pytest.raises(InvalidInputError):
        msc(1.0 + 0j)


def test_msc() -> None:
    """Test the semicircle transform and its self-consistent equation."""
    assert msc(1j) == pytest.approx(1j * (math.sqrt(5.0) - 1.0) / 2.0)
    z = complex(0.7, 0.05)
    m = msc(z)
    assert m.imag > 0.0
    assert m**2 + z * m + 1.0 == pytest.approx(0.0, abs=1e-12)


def test_trace_resolvent() -> None:
    """Test Tr G on a fixed spectrum."""
    spectrum = np.array([-1.0, 0.0, 1.0])
    z = complex(0.0, 1.0)
    expected = sum(1.0 / (value - z) for value in spectrum)
    assert trace_resolvent(spectrum, z) == pytest.approx(expected)
    assert stieltjes_empirical(spectrum, SpectralPoint(0.0, 1.0)) == pytest.approx(
        expected / 3.0
    )


def test_pool_traces(gue_pool: SpectrumPool) -> None:
    """Test one trace per trial and Im m > 0."""
    traces = trace_resolvent(gue_pool, complex(0.2, 0.3))
    assert traces.shape == (POOL_TRIALS,)
    assert np.all(stieltjes_empirical(gue_pool, complex(0.2, 0.3)).imag > 0.0)


def test_local_law(gue_pool: SpectrumPool, caplog: pytest.LogCaptureFixture) -> None:
    """Test the deviation shrinks as eta grows."""
    caplog.set_level(logging.DEBUG)
    rows = local_law_deviation(gue_pool, [SpectralPoint(0.0, 0.05), complex(0.0, 1.0)])
    assert [row.eta for row in rows] == [0.05, 1.0]
    assert rows[0].n == POOL_N
    assert rows[1].percentile < rows[0].percentile
    assert rows[1].percentile < 0.1
    assert rows[0].scaled == pytest.approx(rows[0].percentile * POOL_N * 0.05)
    assert "local law not guaranteed" in caplog.text


def test_var_trace_sweep(gue_pool: SpectrumPool, tmp_path: Path) -> None:
    """Test Var Tr G grows as eta shrinks and the export."""
    rows = var_trace_sweep(gue_pool, 0.0, [1.0, 0.25])
    assert rows[1].variance > rows[0].variance > 0.0
    assert all(row.se > 0.0 for row in rows)
    assert rows[0].scaled == pytest.approx(rows[0].variance)
    export_var_trace_csv(rows, tmp_path / "var.csv")
    header, body = read_csv(tmp_path / "var.csv")
    assert header == ["n", "E", "eta", "var", "se", "eta^2.2*var"]
    assert body[0][:3] == ["40", "0.0", "1.0"]


def test_scaled_trace_variance_bounded() -> None:
    """Test eta^2.2 Var Tr G(i eta) stays bounded as eta shrinks."""
    pool = build_pool(EnsembleSpec(ENSEMBLE_GUE, 200), 5, 500, workers=2)
    rows = var_trace_sweep(pool, 0.0, [2.0**-j for j in range(1, 5)])
    scaled = [row.scaled for row in rows]
    assert rows[-1].variance > rows[0].variance
    assert max(scaled) <= 10.0 * scaled[0]


@pytest.mark.parametrize("eta", [0.001, 11.0], ids=("below_floor", "above_window"))
def test_var_trace_sweep_eta_range(gue_pool: SpectrumPool, eta: float) -> None:
    """Test eta outside (n^-0.9, 10]."""
    with pytest.raises(InvalidInputError, match="outside"):
        var_trace_sweep(gue_pool, 0.0, [eta])


def test_var_trace_sweep_trials(
    gue_pool: SpectrumPool, caplog: pytest.LogCaptureFixture
) -> None:
    """Test the trial floor and the warning below the recommendation."""
    with pytest.raises(InvalidInputError, match="too few"):
        var_trace_sweep(_small_pool(gue_pool, 50), 0.0, [1.0])
    var_trace_sweep(_small_pool(gue_pool, 200), 0.0, [1.0])
    assert "Only 200 trials" in caplog.text


def test_variance_bound_integral(gue_pool: SpectrumPool) -> None:
    """Test the integral reuses inner integrals and validates input."""
    etas = np.array([0.25, 0.5, 1.0, 2.0])
    integrated = energy_integrated_variance(gue_pool, etas, (-3.0, 3.0), 13)
    assert integrated.shape == (4,)
    assert np.all(integrated > 0.0)
    direct = variance_bound_integral(
        gue_pool, 1.5, etas, (-3.0, 3.0), energy_nodes=13
    )
    reused = variance_bound_integral(
        gue_pool, 1.5, etas, (-3.0, 3.0), integrated=integrated
    )
    assert direct == pytest.approx(reused)
    assert direct > 0.0


@pytest.mark.parametrize(
    ("s_exponent", "etas", "window"),
    [
        (0.5, [0.5, 1.0], (-3.0, 3.0)),
        (1.5, [1.0, 0.5], (-3.0, 3.0)),
        (1.5, [0.0, 0.5], (-3.0, 3.0)),
        (1.5, [0.5, 1.0], (-7.0, 3.0)),
    ],
    ids=("exponent", "decreasing", "zero_eta", "window"),
)
def test_variance_bound_integral_invalid(
    gue_pool: SpectrumPool, s_exponent: float, etas: list, window: tuple
) -> None:
    """Test the validation."""
    with pytest.raises(InvalidInputError):
        variance_bound_integral(gue_pool, s_exponent, etas, window, energy_nodes=5)


def test_rigidity(gue_pool: SpectrumPool) -> None:
    """Test the scaled displacements stay of order one."""
    report = rigidity_deviation(gue_pool)
    assert report.n == POOL_N
    assert report.deviations.shape == (POOL_TRIALS,)
    assert 0.0 < report.median <= report.maximum
    assert report.median < 10.0


def test_far_field(gue_pool: SpectrumPool) -> None:
    """Test |m(z) + 1/z| <= 2/|z|^2 far from the spectrum."""
    spectra = gue_pool.canonical()[:50]
    assert np.max(np.abs(spectra)) < 3.0
    for z in (10j, complex(10.0, 0.5), complex(-8.0, 8.0)):
        deviation = np.abs(stieltjes_empirical(spectra, z) + 1.0 / z)
        assert np.all(deviation <= 2.0 / abs(z) ** 2)
