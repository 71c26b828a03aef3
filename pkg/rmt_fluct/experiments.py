"""Experiment drivers behind the command line."""

from __future__ import annotations

import asyncio
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Final

import numpy as np
import scipy.stats

from .cdkernel import (
    bulk_asymptotics_check,
    counting_variance,
    counting_variance_fit,
    exact_variance,
    kernel_diagonal,
    kernel_grid,
)
from .const import (
    ATTR_EXACT,
    ATTR_FAMILY,
    ATTR_FUNCTION,
    ATTR_KS,
    ATTR_KS_OK,
    ATTR_LIMIT,
    ATTR_METHOD,
    ATTR_N,
    ATTR_RATIO,
    ATTR_SE,
    ATTR_TAIL,
    ATTR_VALUE,
    ATTR_VARIANCE,
    ATTR_VARIANCE_OK,
    CONF_BAND_COUNT,
    CONF_CONTROL,
    CONF_EIGEN_BACKEND,
    CONF_ENERGY,
    CONF_ETAS,
    CONF_EXACT_KERNEL,
    CONF_FORM,
    CONF_NODES,
    CONF_POINTS,
    CONF_SAMPLER,
    CONF_SOURCE,
    CONF_SVG,
    CONF_T_WINDOW,
    CONF_THRESHOLD,
    DEFAULT_EXACT_KERNEL_MAX_N,
    EDGE_2,
    ENSEMBLE_GOE,
    ENSEMBLE_GUE,
    ENSEMBLE_JOHANSSON,
    ENSEMBLE_WIGNER,
    EXPERIMENT_BANDS,
    EXPERIMENT_CLT,
    EXPERIMENT_COUNTING,
    EXPERIMENT_DEFORMED,
    EXPERIMENT_KERNEL,
    EXPERIMENT_LIMIT_VAR,
    EXPERIMENT_RESOLVENT,
    EXPERIMENT_SAMPLE,
    FAMILY_EDGE_CONVENTION,
    FAMILY_GOE,
    FAMILY_GUE,
    FAMILY_JOHANSSON,
    FAMILY_WIGNER,
    KS_THRESHOLD,
    LIMIT_METHODS,
    LOGGER,
    METHOD_CHEBYSHEV,
    MIN_STATISTICAL_TRIALS,
    VARIANCE_BAND,
)
from .coordinator import SpectrumPool, SpectrumPoolCoordinator
from .deformed import (
    SOURCE_SAMPLED,
    diagonal_ratio_sweep,
    local_law_check,
    product_bound_sweep,
    sampled_deformation,
    semicircle_deformation,
)
from .diagnostics import write_diagnostics
from .ensembles import SpectrumSample, rescale_from_canonical, write_spectra_csv
from .exceptions import InvalidInputError
from .functions import TestFunction, get_function, indicator_at, poisson_kernel
from .limitvar import LimitVarianceRequest, chebyshev_report, limit_variance
from .littlewood_paley import decompose
from .output import histogram_svg, line_plot_svg, write_csv
from .resolvent import (
    export_var_trace_csv,
    local_law_deviation,
    rigidity_deviation,
    var_trace_sweep,
)
from .stats import (
    TREND_SE_MULTIPLE,
    bounded_growth,
    centred,
    jackknife_variance,
    ks_distance,
)

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from .config import ExperimentConfig
    from .ensembles import EnsembleSpec

POISSON_NODES_PER_ETA: Final = 4.0
POISSON_MAX_STEP: Final = 0.05
FIELD_ELEMENTS: Final = 4_000_000

VARIANCE_HEADER: Final = (
    ATTR_FUNCTION,
    ATTR_N,
    "trials",
    ATTR_VARIANCE,
    ATTR_SE,
    ATTR_LIMIT,
    ATTR_EXACT,
    ATTR_RATIO,
    ATTR_KS,
    ATTR_VARIANCE_OK,
    ATTR_KS_OK,
)

ENSEMBLE_FAMILY: Final = {
    ENSEMBLE_GUE: FAMILY_GUE,
    ENSEMBLE_GOE: FAMILY_GOE,
    ENSEMBLE_WIGNER: FAMILY_WIGNER,
    ENSEMBLE_JOHANSSON: FAMILY_JOHANSSON,
}


def family_for(spec: EnsembleSpec) -> str:
    return ENSEMBLE_FAMILY[spec.kind]


def _eigenvalues(spectrum: SpectrumSample | SpectrumPool | Any) -> np.ndarray:
    if isinstance(spectrum, SpectrumSample | SpectrumPool):
        return spectrum.eigenvalues
    return np.asarray(spectrum, dtype=float)


def family_spectra(pool: SpectrumPool, family: str) -> np.ndarray:
    """Pool rows on the scale the family's limit variance assumes."""
    return rescale_from_canonical(pool.canonical(), FAMILY_EDGE_CONVENTION[family])


def linear_statistic(
    spectrum: SpectrumSample | SpectrumPool | Any, function: TestFunction
) -> float | np.ndarray:
    """N_n[phi] = sum_j phi(lambda_j); one value per row for 2-D input."""
    values = _eigenvalues(spectrum)
    totals = np.sum(function.evaluate(values), axis=-1)
    return float(totals) if values.ndim == 1 else totals


def poisson_statistic(
    spectrum: SpectrumSample | SpectrumPool | Any, t: Any, eta: float
) -> float | np.ndarray:
    """N_n[P_eta(. - t)], trailing axis over t when t is an array."""
    values = _eigenvalues(spectrum)
    shifts = np.asarray(t, dtype=float)
    kernel = poisson_kernel(values[..., np.newaxis, :] - shifts.reshape(-1, 1), eta)
    totals = np.sum(kernel, axis=-1)
    if shifts.ndim == 0:
        totals = totals[..., 0]
    return float(totals) if totals.ndim == 0 else totals


def _require_trials(config: ExperimentConfig) -> None:
    if config.trials < MIN_STATISTICAL_TRIALS:
        message = (
            f"Insufficient trials: {config.trials} < {MIN_STATISTICAL_TRIALS} "
            f"for {config.experiment}"
        )
        raise InvalidInputError(message)


def _coordinator(config: ExperimentConfig) -> SpectrumPoolCoordinator:
    return SpectrumPoolCoordinator(
        sampler=config.methods[CONF_SAMPLER], backend=config.methods[CONF_EIGEN_BACKEND]
    )


def _exact_kernel_enabled(config: ExperimentConfig) -> bool:
    return bool(
        config.methods[CONF_EXACT_KERNEL] and config.ensemble.kind == ENSEMBLE_GUE
    )


def _limit(function: TestFunction, spec: EnsembleSpec) -> float:
    return limit_variance(
        LimitVarianceRequest(
            function, family_for(spec), kappa4=spec.kappa4 or 0.0, w2=spec.w2
        )
    )


@dataclass
class VarianceRow:
    """Class for holding the variance study of one (phi, n) pair."""

    function: str
    n: int
    trials: int
    variance: float
    se: float
    limit: float
    exact: float | None = None
    ks: float | None = None
    mean: float = 0.0

    @property
    def ratio(self) -> float | None:
        return self.variance / self.limit if self.limit > 0.0 else None

    @property
    def variance_ok(self) -> bool | None:
        if self.ratio is None:
            return None
        low, high = VARIANCE_BAND
        return low <= self.ratio <= high

    @property
    def ks_ok(self) -> bool | None:
        return None if self.ks is None else self.ks <= KS_THRESHOLD

    def within_se(self, reference: float, multiple: float = 3.0) -> bool:
        return abs(self.variance - reference) <= multiple * self.se


@dataclass
class VarianceReport:
    """Class for holding a CLT study."""

    family: str
    rows: list[VarianceRow] = field(default_factory=list)
    statistics: dict[tuple[str, int], np.ndarray] = field(
        default_factory=dict, repr=False
    )

    def row(self, function: str, n: int) -> VarianceRow:
        for row in self.rows:
            if row.function == function and row.n == n:
                return row
        message = f"No row for {function} at n={n}"
        raise InvalidInputError(message)

    def bounded(self, function: str, multiple: float = TREND_SE_MULTIPLE) -> bool:
        """No growth of the variance of function across n beyond multiple SE."""
        rows = sorted(
            (row for row in self.rows if row.function == function),
            key=lambda row: row.n,
        )
        if len(rows) < 2:  # noqa: PLR2004
            return True
        return bounded_growth(
            [row.variance for row in rows], [row.se for row in rows], multiple
        )

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            VARIANCE_HEADER,
            (
                [
                    row.function,
                    row.n,
                    row.trials,
                    row.variance,
                    row.se,
                    row.limit,
                    row.exact,
                    row.ratio,
                    row.ks,
                    row.variance_ok,
                    row.ks_ok,
                ]
                for row in self.rows
            ),
        )


def _clt_figures(config: ExperimentConfig, report: VarianceReport) -> None:
    for row in report.rows:
        if row.limit <= 0.0:
            continue
        scale = math.sqrt(row.limit)
        histogram_svg(
            centred(report.statistics[(row.function, row.n)]),
            lambda x, scale=scale: scipy.stats.norm.pdf(x, scale=scale),
            config.output_dir / f"clt_{row.function}_{row.n}.svg",
            f"{row.function}, n={row.n}",
        )
    line_plot_svg(
        list(config.n_list),
        {
            label: [report.row(label, n).variance for n in config.n_list]
            for label in config.functions
        },
        config.output_dir / "clt_variance.svg",
        "Var N_n[phi]",
    )


async def async_clt_experiment(
    config: ExperimentConfig, coordinator: SpectrumPoolCoordinator | None = None
) -> VarianceReport:
    """Empirical variance and normality of N_n[phi] for every (phi, n)."""
    _require_trials(config)
    coordinator = coordinator or _coordinator(config)
    pools = await coordinator.async_build_many(
        config.ensemble, config.seed, config.n_list, config.trials
    )
    family = family_for(config.ensemble)
    functions = config.test_functions
    exact: dict[tuple[str, int], float] = {}
    if _exact_kernel_enabled(config):
        jobs = [
            (n, function)
            for function in functions
            for n in config.n_list
            if n <= DEFAULT_EXACT_KERNEL_MAX_N
        ]
        values = await coordinator.async_map(exact_variance, jobs)
        exact = {
            (function.label, n): value
            for (n, function), value in zip(jobs, values, strict=True)
        }
    report = VarianceReport(family)
    for function in functions:
        limit = _limit(function, config.ensemble)
        for n in config.n_list:
            statistic = linear_statistic(family_spectra(pools[n], family), function)
            variance, se = jackknife_variance(statistic)
            report.statistics[(function.label, n)] = statistic
            report.rows.append(
                VarianceRow(
                    function=function.label,
                    n=n,
                    trials=config.trials,
                    variance=variance,
                    se=se,
                    limit=limit,
                    exact=exact.get((function.label, n)),
                    ks=ks_distance(statistic, limit) if limit > 0.0 else None,
                    mean=float(np.mean(centred(statistic))),
                )
            )
            LOGGER.info(
                "%s n=%d: Var=%.6g +- %.2g, limit %.6g", function.label, n, variance, se, limit
            )
        if not report.bounded(function.label):
            LOGGER.warning(
                "Variance of %s grows with n beyond %g SE",
                function.label,
                TREND_SE_MULTIPLE,
            )
    report.to_csv(config.output_dir / "clt.csv")
    if config.methods[CONF_SVG]:
        _clt_figures(config, report)
    return report


def clt_experiment(config: ExperimentConfig) -> VarianceReport:
    return asyncio.run(async_clt_experiment(config))


@dataclass
class CountingRow:
    """Class for holding counting and control variances at one n."""

    n: int
    variance: float
    se: float
    control_variance: float
    control_se: float
    exact: float | None = None
    control_exact: float | None = None


@dataclass
class CountingReport:
    """Class for holding the log n growth of the counting variance."""

    threshold: float
    control: str
    rows: list[CountingRow]
    ks: float
    fit: Any = None
    control_fit: Any = None
    exact_fit: Any = None
    control_exact_fit: Any = None

    @property
    def control_slope_ratio(self) -> float:
        return abs(self.control_fit.slope) / abs(self.fit.slope)

    @property
    def exact_control_slope_ratio(self) -> float | None:
        """Control against indicator slope from the finite-n kernel columns."""
        if self.exact_fit is None or self.control_exact_fit is None:
            return None
        return abs(self.control_exact_fit.slope) / abs(self.exact_fit.slope)

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            [
                ATTR_N,
                ATTR_VARIANCE,
                ATTR_SE,
                ATTR_EXACT,
                "control_variance",
                "control_se",
                "control_exact",
            ],
            (
                [
                    row.n,
                    row.variance,
                    row.se,
                    row.exact,
                    row.control_variance,
                    row.control_se,
                    row.control_exact,
                ]
                for row in self.rows
            ),
        )


async def async_indicator_divergence_experiment(
    config: ExperimentConfig, coordinator: SpectrumPoolCoordinator | None = None
) -> CountingReport:
    """Var of the eigenvalue count above a threshold against log n."""
    _require_trials(config)
    coordinator = coordinator or _coordinator(config)
    threshold = config.counting[CONF_THRESHOLD]
    indicator = indicator_at(threshold)
    control = get_function(config.counting[CONF_CONTROL])
    family = family_for(config.ensemble)
    pools = await coordinator.async_build_many(
        config.ensemble, config.seed, config.n_list, config.trials
    )
    exact: list[float | None] = [None] * len(config.n_list)
    control_exact: list[float | None] = [None] * len(config.n_list)
    if _exact_kernel_enabled(config) and config.ensemble.edge_convention == EDGE_2:
        exact = list(
            await coordinator.async_map(
                counting_variance, [(n, threshold) for n in config.n_list]
            )
        )
        control_exact = list(
            await coordinator.async_map(
                exact_variance, [(n, control) for n in config.n_list]
            )
        )
    rows = []
    counts = None
    for n, exact_value, control_value in zip(
        config.n_list, exact, control_exact, strict=True
    ):
        spectra = family_spectra(pools[n], family)
        counts = linear_statistic(spectra, indicator)
        variance, se = jackknife_variance(counts)
        control_variance, control_se = jackknife_variance(linear_statistic(spectra, control))
        rows.append(
            CountingRow(
                n, variance, se, control_variance, control_se, exact_value, control_value
            )
        )
    report = CountingReport(
        threshold=threshold,
        control=control.label,
        rows=rows,
        ks=ks_distance(counts, rows[-1].variance),
        fit=counting_variance_fit(config.n_list, [row.variance for row in rows]),
        control_fit=counting_variance_fit(
            config.n_list, [row.control_variance for row in rows]
        ),
    )
    if all(value is not None for value in exact):
        report.exact_fit = counting_variance_fit(config.n_list, exact)
    if all(value is not None for value in control_exact):
        report.control_exact_fit = counting_variance_fit(config.n_list, control_exact)
    LOGGER.info(
        "Counting variance slope %.4f (reference %.4f)",
        report.fit.slope,
        report.fit.reference,
    )
    report.to_csv(config.output_dir / "counting.csv")
    if config.methods[CONF_SVG]:
        line_plot_svg(
            [math.log(n) for n in config.n_list],
            {
                "indicator": [row.variance for row in rows],
                control.label: [row.control_variance for row in rows],
            },
            config.output_dir / "counting.svg",
            "Var against log n",
            x_label="log n",
        )
    return report


def indicator_divergence_experiment(config: ExperimentConfig) -> CountingReport:
    return asyncio.run(async_indicator_divergence_experiment(config))


@dataclass
class BandCovariance:
    """Class for holding the band-by-band covariance of a linear statistic."""

    function: str
    n: int
    indices: tuple[int, ...]
    matrix: np.ndarray
    direct: float
    direct_se: float

    @property
    def reconstructed(self) -> float:
        return float(np.sum(self.matrix))

    @property
    def relative_gap(self) -> float:
        return abs(self.reconstructed - self.direct) / self.direct

    @property
    def offdiagonal_share(self) -> float:
        offdiagonal = self.reconstructed - float(np.trace(self.matrix))
        return abs(offdiagonal) / abs(self.reconstructed)

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            ["k", "l", "covariance"],
            (
                [k, l, self.matrix[i, j]]
                for i, k in enumerate(self.indices)
                for j, l in enumerate(self.indices)
            ),
        )


def _poisson_nodes(eta: float, window: float) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid rule on [-window, window] resolving the scale eta."""
    step = min(eta / POISSON_NODES_PER_ETA, POISSON_MAX_STEP)
    count = math.ceil(2.0 * window / step) + 1
    nodes = np.linspace(-window, window, count)
    weights = np.full(count, nodes[1] - nodes[0])
    weights[[0, -1]] /= 2.0
    return nodes, weights


def band_covariance(
    spectra: np.ndarray, function: TestFunction, bands: int, t_window: float
) -> BandCovariance:
    """Covariances of the band pieces, each built from Poisson statistics.

    Band k equals the Poisson smoothing at scale 2^-k of its lifted density
    g_k, so N_n[phi_k] = int g_k(t) N_n[P_2^-k(. - t)] dt. All bands share the
    same spectra.
    """
    decomposition = decompose(function, bands)
    trials, n = spectra.shape
    projections = np.empty((len(decomposition.indices), trials))
    for row, (k, lifted) in enumerate(
        zip(decomposition.indices, decomposition.lifted, strict=True)
    ):
        eta = 2.0 ** (-k)
        t, weights = _poisson_nodes(eta, t_window)
        density = weights * np.interp(t, decomposition.grid.nodes, lifted)
        chunk = max(1, FIELD_ELEMENTS // (len(t) * n))
        for start in range(0, trials, chunk):
            block = spectra[start : start + chunk]
            projections[row, start : start + chunk] = (
                poisson_statistic(block, t, eta) @ density
            )
        LOGGER.debug("Band %d of %s: %d Poisson nodes", k, function.label, len(t))
    direct, direct_se = jackknife_variance(linear_statistic(spectra, function))
    return BandCovariance(
        function=function.label,
        n=n,
        indices=decomposition.indices,
        matrix=np.atleast_2d(np.cov(projections)),
        direct=direct,
        direct_se=direct_se,
    )


async def async_band_covariance_experiment(
    config: ExperimentConfig, coordinator: SpectrumPoolCoordinator | None = None
) -> BandCovariance:
    """Band double sum against the directly estimated variance."""
    _require_trials(config)
    coordinator = coordinator or _coordinator(config)
    function = config.test_functions[0]
    n = config.n_list[0]
    pool = await coordinator.async_build(config.ensemble.with_n(n), config.seed, config.trials)
    result = band_covariance(
        family_spectra(pool, family_for(config.ensemble)),
        function,
        config.bands[CONF_BAND_COUNT],
        config.bands[CONF_T_WINDOW],
    )
    LOGGER.info(
        "Band reconstruction of %s: %.6g against %.6g",
        function.label,
        result.reconstructed,
        result.direct,
    )
    result.to_csv(config.output_dir / "bands.csv")
    return result


def band_covariance_experiment(config: ExperimentConfig) -> BandCovariance:
    return asyncio.run(async_band_covariance_experiment(config))


def run_sample(config: ExperimentConfig) -> dict[int, SpectrumPool]:
    """Draw and persist spectra for every n."""
    pools = asyncio.run(
        _coordinator(config).async_build_many(
            config.ensemble, config.seed, config.n_list, config.trials
        )
    )
    for n, pool in pools.items():
        write_spectra_csv(pool.samples(), config.output_dir / f"spectra_{n}.csv")
    return pools


def run_limit_var(config: ExperimentConfig) -> list[dict[str, Any]]:
    """Both limit variance methods for every configured function."""
    spec = config.ensemble
    family = family_for(spec)
    rows = []
    for function in config.test_functions:
        for method in LIMIT_METHODS:
            request = LimitVarianceRequest(
                function, family, kappa4=spec.kappa4 or 0.0, w2=spec.w2, method=method
            )
            tail = (
                chebyshev_report(function, family).tail_ratio
                if method == METHOD_CHEBYSHEV
                else None
            )
            rows.append(
                {
                    ATTR_FUNCTION: function.label,
                    ATTR_FAMILY: family,
                    ATTR_METHOD: method,
                    ATTR_VALUE: limit_variance(request),
                    ATTR_TAIL: tail,
                }
            )
    header = [ATTR_FUNCTION, ATTR_FAMILY, ATTR_METHOD, ATTR_VALUE, ATTR_TAIL]
    write_csv(
        config.output_dir / "limit_var.csv",
        header,
        ([row[key] for key in header] for row in rows),
    )
    return rows


def run_kernel(config: ExperimentConfig) -> list[dict[str, Any]]:
    """Kernel grids and bulk diagnostics at the configured points."""
    points = config.kernel[CONF_POINTS]
    rows = []
    for n in config.n_list:
        kernel_grid(n, points).to_csv(config.output_dir / f"kernel_{n}.csv")
        diagonal = kernel_diagonal(n, points)
        for x, value in zip(points, diagonal, strict=True):
            check = bulk_asymptotics_check(n, x)
            rows.append(
                {
                    ATTR_N: n,
                    "x": x,
                    "diagonal_over_n": float(value) / n,
                    "smoothed_ratio": check.smoothed_ratio,
                    "oscillation_ratio": check.oscillation_ratio,
                }
            )
    header = [ATTR_N, "x", "diagonal_over_n", "smoothed_ratio", "oscillation_ratio"]
    write_csv(
        config.output_dir / "kernel_bulk.csv",
        header,
        ([row[key] for key in header] for row in rows),
    )
    return rows


def run_deformed(config: ExperimentConfig) -> dict[str, list[Any]]:
    """Contour kernel diagnostics for each n."""
    options = config.deformed
    diagonal_rows: list[Any] = []
    product_rows: list[Any] = []
    local_law_rows: list[Any] = []
    for n in config.n_list:
        data = (
            sampled_deformation(n, config.seed, 0)
            if options[CONF_SOURCE] == SOURCE_SAMPLED
            else semicircle_deformation(n)
        )
        points = options[CONF_POINTS]
        diagonal_rows.extend(
            diagonal_ratio_sweep(
                data, points, nodes=options[CONF_NODES], form=options[CONF_FORM]
            )
        )
        product_rows.extend(product_bound_sweep(data, points, nodes=options[CONF_NODES]))
        local_law_rows.extend(
            (n, row) for row in local_law_check(data, [complex(x, 0.1) for x in points])
        )
    write_csv(
        config.output_dir / "deformed_diagonal.csv",
        [ATTR_N, "x", "diagonal_ratio", "saddle_residual", "saddle_drift"],
        (
            [
                row.n,
                row.x,
                row.diagonal_ratio,
                row.saddle_residual,
                row.saddle_drift,
            ]
            for row in diagonal_rows
        ),
    )
    write_csv(
        config.output_dir / "deformed_product.csv",
        [ATTR_N, "x", "y", "scaled_product"],
        ([row.n, row.x, row.y, row.scaled_product] for row in product_rows),
    )
    write_csv(
        config.output_dir / "deformed_local_law.csv",
        [ATTR_N, "w", "deviation", "bound"],
        ([n, row.w, row.deviation, row.bound] for n, row in local_law_rows),
    )
    return {
        "diagonal": diagonal_rows,
        "product": product_rows,
        "local_law": [row for _, row in local_law_rows],
    }


def run_resolvent(config: ExperimentConfig) -> dict[str, list[Any]]:
    """Var Tr G sweep, local law and rigidity for each n."""
    options = config.resolvent
    pools = asyncio.run(
        _coordinator(config).async_build_many(
            config.ensemble, config.seed, config.n_list, config.trials
        )
    )
    energy = options[CONF_ENERGY]
    etas = options[CONF_ETAS]
    sweep: list[Any] = []
    local_law: list[Any] = []
    rigidity: list[Any] = []
    for n in config.n_list:
        sweep.extend(var_trace_sweep(pools[n], energy, etas))
        local_law.extend(
            local_law_deviation(pools[n], [complex(energy, eta) for eta in etas])
        )
        rigidity.append(rigidity_deviation(pools[n]))
    export_var_trace_csv(sweep, config.output_dir / "resolvent_var.csv")
    write_csv(
        config.output_dir / "resolvent_local_law.csv",
        [ATTR_N, "E", "eta", "p95", "p95*n*eta"],
        ([row.n, row.energy, row.eta, row.percentile, row.scaled] for row in local_law),
    )
    write_csv(
        config.output_dir / "resolvent_rigidity.csv",
        [ATTR_N, "median", "max"],
        ([report.n, report.median, report.maximum] for report in rigidity),
    )
    return {"sweep": sweep, "local_law": local_law, "rigidity": rigidity}


EXPERIMENT_RUNNERS: Final[dict[str, Callable[[ExperimentConfig], Any]]] = {
    EXPERIMENT_SAMPLE: run_sample,
    EXPERIMENT_LIMIT_VAR: run_limit_var,
    EXPERIMENT_CLT: clt_experiment,
    EXPERIMENT_COUNTING: indicator_divergence_experiment,
    EXPERIMENT_BANDS: band_covariance_experiment,
    EXPERIMENT_KERNEL: run_kernel,
    EXPERIMENT_DEFORMED: run_deformed,
    EXPERIMENT_RESOLVENT: run_resolvent,
}


def run_experiment(config: ExperimentConfig) -> Any:
    """Run the configured experiment and write its diagnostics."""
    LOGGER.info("Running %s with seed %d", config.experiment, config.seed)
    result = EXPERIMENT_RUNNERS[config.experiment](config)
    write_diagnostics(config)
    return result
