"""Constants for the rmt_fluct laboratory."""

import logging
import math
from typing import Final

DOMAIN: Final = "rmt_fluct"
TITLE: Final = "Random Matrix Fluctuation Laboratory"
LOGGER = logging.getLogger(__package__)

THREADS_ENV_VAR: Final = "RMT_FLUCT_THREADS"

ENSEMBLE_GUE: Final = "gue"
ENSEMBLE_GOE: Final = "goe"
ENSEMBLE_WIGNER: Final = "wigner"
ENSEMBLE_JOHANSSON: Final = "johansson"
ENSEMBLE_KINDS: Final = (
    ENSEMBLE_GUE,
    ENSEMBLE_GOE,
    ENSEMBLE_WIGNER,
    ENSEMBLE_JOHANSSON,
)

FAMILY_GUE: Final = "gue"
FAMILY_GOE: Final = "goe"
FAMILY_WIGNER: Final = "wigner"
FAMILY_JOHANSSON: Final = "johansson_sqrt2"
FAMILIES: Final = (FAMILY_GUE, FAMILY_GOE, FAMILY_WIGNER, FAMILY_JOHANSSON)

LAW_GAUSSIAN: Final = "gaussian"
LAW_RADEMACHER: Final = "rademacher"
LAW_UNIFORM: Final = "uniform"
LAW_THREE_POINT: Final = "three_point"
ENTRY_LAWS: Final = (LAW_GAUSSIAN, LAW_RADEMACHER, LAW_UNIFORM, LAW_THREE_POINT)
FIVE_MOMENT_LAWS: Final = (LAW_GAUSSIAN, LAW_THREE_POINT)

EDGE_2: Final = "edge2"
EDGE_SQRT2: Final = "edge_sqrt2"
EDGE_CONVENTIONS: Final = (EDGE_2, EDGE_SQRT2)
EDGE_SCALE: Final = {EDGE_2: 1.0, EDGE_SQRT2: 1.0 / math.sqrt(2.0)}
FAMILY_EDGE_CONVENTION: Final = {
    FAMILY_GUE: EDGE_2,
    FAMILY_GOE: EDGE_2,
    FAMILY_WIGNER: EDGE_2,
    FAMILY_JOHANSSON: EDGE_SQRT2,
}

SAMPLER_DENSE: Final = "dense"
SAMPLER_TRIDIAGONAL: Final = "tridiagonal"
SAMPLERS: Final = (SAMPLER_DENSE, SAMPLER_TRIDIAGONAL)

BACKEND_LAPACK: Final = "lapack"
BACKEND_HOUSEHOLDER_QL: Final = "householder_ql"
EIGEN_BACKENDS: Final = (BACKEND_LAPACK, BACKEND_HOUSEHOLDER_QL)

METHOD_QUADRATURE: Final = "quadrature"
METHOD_CHEBYSHEV: Final = "chebyshev"
LIMIT_METHODS: Final = (METHOD_QUADRATURE, METHOD_CHEBYSHEV)

FLAVOR_B22: Final = "b22"
FLAVOR_BINF: Final = "binf"
BESOV_FLAVORS: Final = (FLAVOR_B22, FLAVOR_BINF)

EXPERIMENT_SAMPLE: Final = "sample"
EXPERIMENT_LIMIT_VAR: Final = "limit-var"
EXPERIMENT_CLT: Final = "clt"
EXPERIMENT_COUNTING: Final = "counting"
EXPERIMENT_BANDS: Final = "bands"
EXPERIMENT_KERNEL: Final = "kernel"
EXPERIMENT_DEFORMED: Final = "deformed"
EXPERIMENT_RESOLVENT: Final = "resolvent"
EXPERIMENTS: Final = (
    EXPERIMENT_SAMPLE,
    EXPERIMENT_LIMIT_VAR,
    EXPERIMENT_CLT,
    EXPERIMENT_COUNTING,
    EXPERIMENT_BANDS,
    EXPERIMENT_KERNEL,
    EXPERIMENT_DEFORMED,
    EXPERIMENT_RESOLVENT,
)

CONF_EXPERIMENT: Final = "experiment"
CONF_ENSEMBLE: Final = "ensemble"
CONF_KIND: Final = "kind"
CONF_ENTRY_LAW: Final = "entry_law"
CONF_EDGE_CONVENTION: Final = "edge_convention"
CONF_KAPPA4: Final = "kappa4"
CONF_W2: Final = "w2"
CONF_FUNCTIONS: Final = "functions"
CONF_N_LIST: Final = "n_list"
CONF_TRIALS: Final = "trials"
CONF_SEED: Final = "seed"
CONF_OUTPUT_DIR: Final = "output_dir"
CONF_METHODS: Final = "methods"
CONF_SAMPLER: Final = "sampler"
CONF_EIGEN_BACKEND: Final = "eigen_backend"
CONF_EXACT_KERNEL: Final = "exact_kernel"
CONF_SVG: Final = "svg"
CONF_COUNTING: Final = "counting"
CONF_THRESHOLD: Final = "threshold"
CONF_CONTROL: Final = "control"
CONF_BANDS: Final = "bands"
CONF_BAND_COUNT: Final = "band_count"
CONF_T_WINDOW: Final = "t_window"
CONF_RESOLVENT: Final = "resolvent"
CONF_ENERGY: Final = "energy"
CONF_ETAS: Final = "etas"
CONF_KERNEL: Final = "kernel"
CONF_POINTS: Final = "points"
CONF_DEFORMED: Final = "deformed"
CONF_SOURCE: Final = "source"
CONF_NODES: Final = "nodes"
CONF_FORM: Final = "form"
CONF_LOGGER: Final = "logger"
CONF_DEFAULT: Final = "default"
CONF_LOGS: Final = "logs"

GROUP_ALL: Final = "all"
GROUP_SMOOTH: Final = "smooth"
GROUP_HOLDER: Final = "holder"
GROUP_INDICATOR: Final = "indicator"

DEFAULT_ENSEMBLE: Final = ENSEMBLE_GUE
DEFAULT_ENTRY_LAW: Final = LAW_GAUSSIAN
DEFAULT_W2: Final = 1.0
DEFAULT_N_LIST: Final = (100, 200, 400)
DEFAULT_TRIALS: Final = 2000
DEFAULT_SEED: Final = 2024
DEFAULT_OUTPUT_DIR: Final = "out"
DEFAULT_SAMPLER: Final = SAMPLER_TRIDIAGONAL
DEFAULT_EIGEN_BACKEND: Final = BACKEND_LAPACK
DEFAULT_EXACT_KERNEL_MAX_N: Final = 400
DEFAULT_COUNTING_THRESHOLD: Final = 0.0
DEFAULT_COUNTING_CONTROL: Final = "bump"
DEFAULT_BAND_COUNT: Final = 4
DEFAULT_T_WINDOW: Final = 6.0
DEFAULT_ENERGY: Final = 0.0
DEFAULT_ETAS: Final = (0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625)
DEFAULT_KERNEL_POINTS: Final = (0.0, 0.3, 0.6, 1.2)
DEFAULT_CONTOUR_NODES: Final = 4096
DEFAULT_LOG_LEVEL: Final = "info"
LOG_LEVELS: Final = ("debug", "info", "warning", "error", "critical")
DEFAULT_DEFORMED_SOURCE: Final = "semicircle"
DEFAULT_CONTOUR_FORM: Final = "separated"
DEFAULT_DEFORMED_POINTS: Final = (-0.6, -0.3, 0.0, 0.3, 0.6)

DEFAULT_GRID_HALF_WIDTH: Final = 8.0
DEFAULT_GRID_EXPONENT: Final = 14
DEFAULT_QUADRATURE_NODES: Final = 512
DEFAULT_CHEBYSHEV_TERMS: Final = 2048
DEFAULT_KERNEL_HALF_WIDTH: Final = 2.8
DEFAULT_KERNEL_NODES: Final = 2048
DEFAULT_CONTOUR_MAX_N: Final = 200

MIN_STATISTICAL_TRIALS: Final = 100
VARIANCE_BAND: Final = (0.85, 1.15)
KS_THRESHOLD: Final = 0.05
COUNTING_SLOPE: Final = 1.0 / (2.0 * math.pi**2)

ATTR_SEED: Final = "seed"
ATTR_TRIAL: Final = "trial"
ATTR_FUNCTION: Final = "function"
ATTR_FAMILY: Final = "family"
ATTR_METHOD: Final = "method"
ATTR_VALUE: Final = "value"
ATTR_TAIL: Final = "tail"
ATTR_N: Final = "n"
ATTR_VARIANCE: Final = "variance"
ATTR_SE: Final = "se"
ATTR_LIMIT: Final = "limit"
ATTR_EXACT: Final = "exact"
ATTR_RATIO: Final = "ratio"
ATTR_KS: Final = "ks"
ATTR_VARIANCE_OK: Final = "variance_ok"
ATTR_KS_OK: Final = "ks_ok"
