"""The tests for the ensembles file."""

from pathlib import Path

import numpy as np
import pytest

from rmt_fluct.const import (
    BACKEND_HOUSEHOLDER_QL,
    EDGE_2,
    EDGE_SQRT2,
    ENSEMBLE_GOE,
    ENSEMBLE_GUE,
    ENSEMBLE_JOHANSSON,
    ENSEMBLE_WIGNER,
    LAW_GAUSSIAN,
    LAW_RADEMACHER,
    LAW_THREE_POINT,
    LAW_UNIFORM,
    SAMPLER_DENSE,
    SAMPLER_TRIDIAGONAL,
)
from rmt_fluct.ensembles import (
    ENTRY_LAW_TABLE,
    EnsembleSpec,
    read_spectra_csv,
    rescale_from_canonical,
    rescale_to_canonical,
    rng_for,
    sample_johansson,
    sample_spectrum,
    semicircle_cdf,
    semicircle_quantiles,
    semicircle_stieltjes,
    write_spectra_csv,
)
from rmt_fluct.exceptions import InvalidInputError


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "cue"},
        {"n": 0},
        {"w2": 0.0},
        {"kind": ENSEMBLE_GUE, "kappa4": 1.0},
        {"edge_convention": "edge3"},
        {"entry_law": "cauchy"},
    ],
    ids=("kind", "dimension", "w2", "gue kappa4", "convention", "law"),
)
def test_invalid_spec(kwargs: dict) -> None:
    """Test ensemble validation."""
    with pytest.raises(InvalidInputError):
        EnsembleSpec(**kwargs)


def test_spec_defaults() -> None:
    """Test convention and cumulant defaults."""
    assert EnsembleSpec(ENSEMBLE_GUE).edge_convention == EDGE_2
    assert EnsembleSpec(ENSEMBLE_GUE).kappa4 == 0.0
    assert EnsembleSpec(ENSEMBLE_JOHANSSON).edge_convention == EDGE_SQRT2
    wigner = EnsembleSpec(ENSEMBLE_WIGNER, 10, LAW_RADEMACHER)
    assert wigner.kappa4 == pytest.approx(-1.0)
    assert wigner.with_n(30).n == 30
    assert wigner.with_n(30).kappa4 == wigner.kappa4


@pytest.mark.parametrize(
    ("law", "kurtosis"),
    [
        (LAW_GAUSSIAN, 3.0),
        (LAW_RADEMACHER, 1.0),
        (LAW_UNIFORM, 1.8),
        (LAW_THREE_POINT, 3.0),
    ],
    ids=("gaussian", "rademacher", "uniform", "three point"),
)
def test_entry_law_moments(law: str, kurtosis: float) -> None:
    """Test the standardized draws match the declared moments."""
    values = ENTRY_LAW_TABLE[law].standardized(rng_for(3, 0), (200_000,))
    assert np.mean(values) == pytest.approx(0.0, abs=0.01)
    assert np.var(values) == pytest.approx(1.0, abs=0.02)
    assert np.mean(values**4) == pytest.approx(kurtosis, abs=0.08)


def test_five_moment_match() -> None:
    """Test which laws qualify as a Johansson base."""
    assert ENTRY_LAW_TABLE[LAW_GAUSSIAN].matches_gaussian
    assert ENTRY_LAW_TABLE[LAW_THREE_POINT].matches_gaussian
    assert not ENTRY_LAW_TABLE[LAW_RADEMACHER].matches_gaussian
    with pytest.raises(InvalidInputError, match="five moments"):
        sample_johansson(10, LAW_RADEMACHER, 1, 0)


@pytest.mark.parametrize(
    ("kind", "sampler"),
    [
        (ENSEMBLE_GUE, SAMPLER_DENSE),
        (ENSEMBLE_GUE, SAMPLER_TRIDIAGONAL),
        (ENSEMBLE_GOE, SAMPLER_DENSE),
        (ENSEMBLE_GOE, SAMPLER_TRIDIAGONAL),
        (ENSEMBLE_WIGNER, SAMPLER_DENSE),
        (ENSEMBLE_JOHANSSON, SAMPLER_DENSE),
    ],
    ids=(
        "gue dense",
        "gue tridiagonal",
        "goe dense",
        "goe tridiagonal",
        "wigner",
        "johansson",
    ),
)
def test_sample_reproducible(kind: str, sampler: str) -> None:
    """Test spectra depend only on (seed, trial)."""
    spec = EnsembleSpec(kind, 30)
    first = sample_spectrum(spec, 5, 2, sampler=sampler)
    again = sample_spectrum(spec, 5, 2, sampler=sampler)
    other = sample_spectrum(spec, 5, 3, sampler=sampler)
    assert first.n == 30
    assert np.all(np.diff(first.eigenvalues) >= 0.0)
    np.testing.assert_array_equal(first.eigenvalues, again.eigenvalues)
    assert not np.array_equal(first.eigenvalues, other.eigenvalues)
    assert first.ensemble == spec


@pytest.mark.parametrize(
    "sampler", [SAMPLER_DENSE, SAMPLER_TRIDIAGONAL], ids=("dense", "tridiagonal")
)
def test_second_moment(sampler: str) -> None:
    """Test E[Tr H^2 / n] = 1 for both samplers."""
    spec = EnsembleSpec(ENSEMBLE_GUE, 50)
    moments = [
        np.mean(sample_spectrum(spec, 9, trial, sampler=sampler).eigenvalues ** 2)
        for trial in range(200)
    ]
    assert np.mean(moments) == pytest.approx(1.0, abs=0.01)


def test_edges() -> None:
    """Test the spectra sit on the declared edge."""
    gue = sample_spectrum(EnsembleSpec(ENSEMBLE_GUE, 200), 1, 0)
    assert 1.8 < gue.eigenvalues[-1] < 2.3
    johansson = sample_spectrum(EnsembleSpec(ENSEMBLE_JOHANSSON, 200), 1, 0)
    assert 1.2 < johansson.eigenvalues[-1] < 1.7
    assert 1.8 < johansson.canonical()[-1] < 2.3


def test_edge_convention_override() -> None:
    """Test sampling on the sqrt(2) edge for a GUE spectrum."""
    canonical = sample_spectrum(EnsembleSpec(ENSEMBLE_GUE, 20), 4, 0)
    scaled = sample_spectrum(
        EnsembleSpec(ENSEMBLE_GUE, 20, edge_convention=EDGE_SQRT2), 4, 0
    )
    np.testing.assert_allclose(scaled.eigenvalues * np.sqrt(2.0), canonical.eigenvalues)
    np.testing.assert_allclose(scaled.canonical(), canonical.eigenvalues)


def test_backends_agree() -> None:
    """Test the Householder-QL backend against LAPACK on the same matrix."""
    spec = EnsembleSpec(ENSEMBLE_GUE, 25)
    lapack = sample_spectrum(spec, 8, 1, sampler=SAMPLER_DENSE)
    householder = sample_spectrum(
        spec, 8, 1, sampler=SAMPLER_DENSE, backend=BACKEND_HOUSEHOLDER_QL
    )
    np.testing.assert_allclose(householder.eigenvalues, lapack.eigenvalues, atol=1e-10)


def test_unknown_sampler_and_backend() -> None:
    """Test unknown sampler and backend names."""
    spec = EnsembleSpec(ENSEMBLE_GUE, 5)
    with pytest.raises(InvalidInputError, match="sampler"):
        sample_spectrum(spec, 1, 0, sampler="lanczos")
    with pytest.raises(InvalidInputError, match="backend"):
        sample_spectrum(spec, 1, 0, backend="magma")


def test_rescale_round_trip() -> None:
    """Test rescaling is the identity after a round trip."""
    values = np.linspace(-1.4, 1.4, 11)
    np.testing.assert_allclose(
        rescale_from_canonical(rescale_to_canonical(values, EDGE_SQRT2), EDGE_SQRT2),
        values,
    )
    np.testing.assert_allclose(rescale_to_canonical(values, None), values)


def test_semicircle() -> None:
    """Test the semicircle helpers."""
    assert float(semicircle_cdf(0.0)) == pytest.approx(0.5)
    assert float(semicircle_cdf(3.0)) == 1.0
    quantiles = semicircle_quantiles(9)
    np.testing.assert_allclose(quantiles, -quantiles[::-1], atol=1e-12)
    np.testing.assert_allclose(semicircle_cdf(quantiles), (np.arange(1, 10) - 0.5) / 9)
    assert complex(semicircle_stieltjes(1j)) == pytest.approx(
        1j * (np.sqrt(5.0) - 1.0) / 2.0
    )


def test_spectra_csv(tmp_path: Path) -> None:
    """Test writing and reading spectra."""
    spec = EnsembleSpec(ENSEMBLE_GUE, 6)
    samples = [sample_spectrum(spec, 2, trial) for trial in range(3)]
    path = tmp_path / "spectra.csv"
    write_spectra_csv(samples, path)
    loaded = read_spectra_csv(path, spec)
    assert [sample.trial for sample in loaded] == [0, 1, 2]
    for sample, original in zip(loaded, samples, strict=True):
        np.testing.assert_array_equal(sample.eigenvalues, original.eigenvalues)
