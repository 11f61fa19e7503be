import dataclasses
import math
from typing import Iterable, Tuple

import numpy as np
from scipy import stats

from kquad.errors import FitUnavailableError

MIN_FIT_POINTS = 3


@dataclasses.dataclass(frozen=True)
class RateFit:
    """Least squares line ln(value) = intercept + slope * ln(n)."""

    slope: float
    intercept: float
    residual_rms: float
    points_used: int

    def predict(self, n) -> np.ndarray | float:
        value = np.exp(self.intercept) * np.asarray(n, dtype=np.float64) ** self.slope
        return float(value) if np.ndim(value) == 0 else value


def fit_rate(pairs: Iterable[Tuple[float, float]]) -> RateFit:
    """Fit a power law to (n, value) pairs, ignoring nonpositive or non-finite values."""
    usable = [(n, v) for n, v in pairs if n > 0 and math.isfinite(v) and v > 0]
    if len(usable) < MIN_FIT_POINTS:
        raise FitUnavailableError(f"A rate fit needs at least {MIN_FIT_POINTS} positive values, got {len(usable)}.")
    log_n = np.log(np.array([n for n, _ in usable], dtype=np.float64))
    log_v = np.log(np.array([v for _, v in usable], dtype=np.float64))
    if np.ptp(log_n) == 0:
        raise FitUnavailableError("A rate fit needs at least two distinct values of n.")
    result = stats.linregress(log_n, log_v)
    residuals = log_v - (result.intercept + result.slope * log_n)
    return RateFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        points_used=len(usable),
    )
