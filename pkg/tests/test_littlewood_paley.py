"""The tests for the littlewood_paley file."""

from pathlib import Path

import numpy as np
import pytest

from rmt_fluct.const import FLAVOR_B22, FLAVOR_BINF
from rmt_fluct.exceptions import InvalidInputError
from rmt_fluct.functions import (
    CLASS_SMOOTH,
    Grid,
    Regularity,
    TestFunction,
    constant,
    get_function,
)
from rmt_fluct.littlewood_paley import (
    besov_norm,
    build_dyadic_partition,
    decompose,
    export_band_norms_csv,
    export_decomposition_csv,
    high_freq_cutoff,
    hs_norm,
    l2_norm,
    max_bands,
    poisson_smooth,
    sup_norm,
)
from rmt_fluct.output import read_csv

TONE_FREQUENCY = 16.0 * np.pi


def _tone(frequency: float = TONE_FREQUENCY) -> TestFunction:
    return TestFunction(
        f"cos_{frequency:g}", lambda x: np.cos(frequency * x), Regularity(CLASS_SMOOTH)
    )


def _slope(x: list[float], errors: list[float]) -> float:
    return float(np.polyfit(np.log2(x), np.log2(errors), 1)[0])


@pytest.mark.parametrize("bands", [1, 3, 6], ids=("one", "three", "six"))
def test_partition_of_unity(bands: int) -> None:
    """Test low-pass, bands and remainder sum to one."""
    partition = build_dyadic_partition(bands)
    xi = np.linspace(0.0, 500.0, 20001)
    np.testing.assert_allclose(partition.total(xi) + partition.remainder(xi), 1.0)
    np.testing.assert_allclose(partition.total(xi[xi < partition.resolved_limit]), 1.0)


def test_band_support() -> None:
    """Test every band vanishes off its annulus."""
    partition = build_dyadic_partition(4)
    xi = np.linspace(0.0, 100.0, 10001)
    for k in partition.indices:
        inner, outer = partition.annulus(k)
        outside = (xi < inner) | (xi > outer)
        assert np.all(partition.multiplier(k, xi)[outside] == 0.0)


def test_partition_validation() -> None:
    """Test band counts outside the grid."""
    with pytest.raises(InvalidInputError):
        build_dyadic_partition(0)
    grid = Grid()
    with pytest.raises(InvalidInputError, match="Nyquist"):
        decompose(get_function("bump"), max_bands(grid) + 1)


@pytest.mark.parametrize(
    "label", ["bump", "tent", "abs_pow_0.6"], ids=("smooth", "sobolev", "holder")
)
def test_reconstruction(label: str) -> None:
    """Test the bands and remainder add back up to the function."""
    function = get_function(label)
    decomposition = decompose(function, 5)
    np.testing.assert_allclose(
        decomposition.reconstruct(), function.grid_values, atol=1e-12
    )
    assert len(decomposition.components) == 7
    assert decomposition.scales[0] == 2.0


def test_hs_norm_parseval() -> None:
    """Test H^0 is the L2 norm."""
    function = get_function("gaussian")
    assert hs_norm(function, 0.0) == pytest.approx(
        l2_norm(function.grid_values, function.grid), rel=1e-10
    )
    assert hs_norm(function, 1.0) > hs_norm(function, 0.0)


def test_besov_norms() -> None:
    """Test the Besov norms order with the smoothness index."""
    function = get_function("cusp")
    decomposition = decompose(function, max_bands(function.grid))
    for flavor in (FLAVOR_B22, FLAVOR_BINF):
        low = besov_norm(decomposition, 0.5, flavor)
        high = besov_norm(decomposition, 1.5, flavor)
        assert 0.0 < low < high
    assert besov_norm(function, 0.5) == pytest.approx(besov_norm(decomposition, 0.5))
    with pytest.raises(InvalidInputError):
        besov_norm(decomposition, 0.5, "b11")


def test_poisson_smooth() -> None:
    """Test smoothing lowers the sup norm of a kink."""
    function = get_function("tent")
    smoothed = poisson_smooth(function, 0.1)
    assert smoothed.label == "tent_poisson_0.1"
    assert np.max(smoothed.grid_values) < np.max(function.grid_values)
    assert np.sum(smoothed.grid_values) == pytest.approx(np.sum(function.grid_values))
    with pytest.raises(InvalidInputError):
        poisson_smooth(function, 0.0)


def test_high_freq_cutoff() -> None:
    """Test the cutoff converges to the function."""
    function = get_function("gaussian")
    errors = [
        np.max(np.abs(high_freq_cutoff(function, m).grid_values - function.grid_values))
        for m in (2, 3, 4)
    ]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-6
    with pytest.raises(InvalidInputError):
        high_freq_cutoff(function, -1)


def test_export(tmp_path: Path) -> None:
    """Test the decomposition tables."""
    decomposition = decompose(get_function("bump"), 2)
    export_decomposition_csv(decomposition, tmp_path / "bands.csv")
    export_band_norms_csv(decomposition, tmp_path / "norms.csv")
    header, rows = read_csv(tmp_path / "bands.csv")
    assert header == ["x", "phi", "phi_-1", "phi_0", "phi_1", "phi_2", "rest"]
    assert len(rows) == decomposition.grid.size
    header, rows = read_csv(tmp_path / "norms.csv")
    assert header == ["k", "l2", "sup", "lifted_l2", "lifted_sup"]
    assert [row[0] for row in rows] == ["-1", "0", "1", "2"]


def test_squares_bound() -> None:
    """Test the squared multipliers never sum above one."""
    partition = build_dyadic_partition(10)
    xi = Grid().frequencies
    squares = partition.low(xi) ** 2 + sum(
        partition.band(k, xi) ** 2 for k in range(partition.bands + 1)
    )
    assert np.all(squares >= 0.0)
    assert np.all(squares <= 1.0 + 1e-12)


@pytest.mark.parametrize("label", ["bump", "gaussian", "sin3"])
def test_bands_alone_reconstruct(label: str) -> None:
    """Test the bands without the remainder give back a smooth function."""
    function = get_function(label)
    bands = function.grid.exponent // 2
    decomposition = decompose(function, bands)
    error = l2_norm(
        np.sum(decomposition.components, axis=0) - function.grid_values,
        function.grid,
    )
    assert error <= 1e-6 * l2_norm(function.grid_values, function.grid)


def test_constant_lives_in_low_band() -> None:
    """Test a constant has no band component besides the low-pass."""
    decomposition = decompose(constant(2.0), 3)
    np.testing.assert_allclose(decomposition.component(-1), 2.0, atol=1e-12)
    for k in range(4):
        np.testing.assert_allclose(decomposition.component(k), 0.0, atol=1e-12)


def test_pure_tone_single_band() -> None:
    """Test a tone puts its energy into the band covering its frequency."""
    decomposition = decompose(_tone(), 7)
    energies = np.array(
        [
            l2_norm(component, decomposition.grid) ** 2
            for component in decomposition.components
        ]
    )
    top = int(np.argmax(energies))
    k = decomposition.indices[top]
    assert k == 5
    inner, outer = decomposition.partition.annulus(k)
    assert inner <= TONE_FREQUENCY <= outer
    assert energies[top] >= 0.999 * np.sum(energies)


@pytest.mark.parametrize(
    "label", ["bump", "gaussian", "sin3", "abs_pow_0.6"], ids=lambda label: label
)
def test_lifted_densities(label: str) -> None:
    """Test the lifted densities are finite and comparable to their bands."""
    function = get_function(label)
    decomposition = decompose(function, function.grid.exponent // 2)
    floor = 1e-8 * l2_norm(function.grid_values, function.grid)
    for component, lifted in zip(
        decomposition.components, decomposition.lifted, strict=True
    ):
        assert np.all(np.isfinite(lifted))
        size = l2_norm(component, decomposition.grid)
        if size <= floor:
            continue
        assert l2_norm(lifted, decomposition.grid) <= 10.0 * size
        assert sup_norm(lifted) <= 10.0 * sup_norm(component)


@pytest.mark.parametrize("s", [0.5, 1.0, 1.5], ids=("half", "one", "three_halves"))
def test_besov_equivalent_to_sobolev(s: float) -> None:
    """Test B22 and H^s stay within a factor four of each other."""
    function = get_function("gaussian")
    assert 0.25 <= besov_norm(function, s) / hs_norm(function, s) <= 4.0


def test_holder_norm_under_refinement() -> None:
    """Test the sup band norm is grid-stable for a cusp and grows for a jump."""
    cusp = get_function("abs_pow_0.6")
    coarse = besov_norm(cusp, 0.6, FLAVOR_BINF)
    fine = besov_norm(cusp.on_grid(cusp.grid.refined()), 0.6, FLAVOR_BINF)
    assert 0.8 <= fine / coarse <= 1.25
    jump = get_function("indicator")
    coarse = besov_norm(jump, 0.5, FLAVOR_BINF)
    fine = besov_norm(jump.on_grid(jump.grid.refined()), 0.5, FLAVOR_BINF)
    assert fine / coarse > 1.3


def test_poisson_smooth_tone() -> None:
    """Test the multiplier acts on a tone by exp(-eta omega)."""
    tone = _tone()
    smoothed = poisson_smooth(tone, 0.1)
    np.testing.assert_allclose(
        smoothed.grid_values,
        np.exp(-0.1 * TONE_FREQUENCY) * tone.grid_values,
        rtol=0.0,
        atol=1e-8,
    )
    np.testing.assert_allclose(
        poisson_smooth(constant(), 0.3).grid_values, 1.0, rtol=0.0, atol=1e-12
    )


def test_poisson_smooth_holder_rate() -> None:
    """Test the smoothing error decays at least like eta^alpha."""
    function = get_function("abs_pow_0.6")
    etas = [2.0**-j for j in range(3, 11)]
    errors = [
        sup_norm(poisson_smooth(function, eta).grid_values - function.grid_values)
        for eta in etas
    ]
    assert _slope(etas, errors) >= 0.5


@pytest.mark.parametrize("alpha", [0.4, 0.6, 0.8], ids=("0.4", "0.6", "0.8"))
def test_high_freq_cutoff_holder_rate(alpha: float) -> None:
    """Test the cutoff error decays at least like 2^(-M alpha)."""
    function = get_function(f"abs_pow_{alpha}")
    cutoffs = list(range(3, 10))
    errors = [
        sup_norm(high_freq_cutoff(function, m).grid_values - function.grid_values)
        for m in cutoffs
    ]
    assert -_slope([2.0**m for m in cutoffs], errors) >= alpha - 0.1
