"""Statistics shared by the experiments."""

from __future__ import annotations

import math
from typing import Any, Final

import numpy as np
import scipy.stats

from .exceptions import InvalidInputError

JACKKNIFE_BLOCKS: Final = 20
TREND_SE_MULTIPLE: Final = 2.0


def jackknife_variance(
    values: Any, blocks: int = JACKKNIFE_BLOCKS
) -> tuple[float, float]:
    """Sample variance and its delete-one-block jackknife standard error.

    Complex values give E|X - EX|^2.
    """
    values = np.asarray(values)
    count = len(values)
    if count < 2:  # noqa: PLR2004
        message = f"Variance needs at least two values, got {count}"
        raise InvalidInputError(message)
    variance = float(np.var(values, ddof=1))
    blocks = min(blocks, count)
    groups = np.array_split(np.arange(count), blocks)
    leave_out = np.array(
        [float(np.var(np.delete(values, group), ddof=1)) for group in groups]
    )
    spread = float(np.sum((leave_out - leave_out.mean()) ** 2))
    return variance, math.sqrt((blocks - 1) / blocks * spread)


def centred(values: Any) -> np.ndarray:
    """Subtract the empirical mean."""
    values = np.asarray(values, dtype=float)
    return values - values.mean()


def ks_distance(values: Any, variance: float) -> float:
    """KS statistic of the centred values against N(0, variance)."""
    if variance <= 0.0:
        message = f"KS reference variance must be positive, got {variance}"
        raise InvalidInputError(message)
    result = scipy.stats.kstest(centred(values), "norm", args=(0.0, math.sqrt(variance)))
    return float(result.statistic)


def bounded_growth(
    variances: Any, errors: Any, multiple: float = TREND_SE_MULTIPLE
) -> bool:
    """No increase from the first to any later entry beyond multiple combined SE."""
    variances = np.asarray(variances, dtype=float)
    errors = np.asarray(errors, dtype=float)
    allowed = multiple * np.hypot(errors[0], errors[1:])
    return bool(np.all(variances[1:] - variances[0] <= allowed))
