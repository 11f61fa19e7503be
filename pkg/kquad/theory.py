"""
Predicted convergence exponents.

Every predictor returns a decay rate p such that the error is O(n^{-p}); fitted log-log slopes are compared
against -p. The constants of the underlying finite sample bounds are not constructive and are not computed.
"""

import dataclasses
from typing import Dict

from kquad.errors import DomainError, GuaranteeVoidError


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def rate_weight_bound(b: float, c: float, r: float, s: float) -> float:
    """Misspecified rate from e_n = O(n^{-b}) and sum |w_i| = O(n^c): bs/r - c(r - s)/r."""
    _require(b > 0, f"b must be positive, got {b}.")
    _require(c >= 0, f"c must be nonnegative, got {c}.")
    _require(s <= r, f"s must not exceed r, got s={s}, r={r}.")
    return b * s / r - c * (r - s) / r


def rate_sep_bound(a: float, b: float, r: float, s: float) -> float:
    """Misspecified rate from e_n = O(n^{-b}) and q = Theta(n^{-a}): min(b - a(r - s), as). May be negative."""
    _require(a > 0, f"a must be positive, got {a}.")
    _require(b > 0, f"b must be positive, got {b}.")
    _require(s <= r, f"s must not exceed r, got s={s}, r={r}.")
    return min(b - a * (r - s), a * s)


def rate_bq_misspecified(alpha: float, delta: float, r: float, s: float) -> float:
    """BQ rate when h = O(n^{-alpha}) and h <= c q^delta: alpha [r - (r - s)/delta]."""
    _require(alpha > 0, f"alpha must be positive, got {alpha}.")
    _require(s <= r, f"s must not exceed r, got s={s}, r={r}.")
    _require(delta <= 1, f"delta must not exceed 1, got {delta}.")
    if delta <= 1 - s / r:
        raise GuaranteeVoidError(
            f"delta={delta} <= 1 - s/r = {1 - s / r}: the bound has a nonpositive exponent and guarantees nothing."
        )
    # Written as s - (r - s)(1/delta - 1) so that delta = 1 gives exactly alpha * s.
    return alpha * (s - (r - s) * (1.0 / delta - 1.0))


def rate_bq_wellspecified(alpha: float, r: float, d: int = 1) -> float:
    """BQ rate in its own RKHS when h = O(n^{-alpha}): alpha r."""
    _require(0 < alpha <= 1 / d, f"alpha must lie in (0, 1/d] = (0, {1 / d}], got {alpha}.")
    return alpha * r


@dataclasses.dataclass(frozen=True)
class RateInputs:
    r: float
    s: float
    b: float | None = None
    c: float = 0.0
    a: float | None = None
    alpha: float | None = None
    delta: float = 1.0
    d: int = 1

    def __post_init__(self):
        _require(self.d >= 1, f"d must be a positive integer, got {self.d}.")
        _require(self.r > self.d / 2, f"r must exceed d/2 = {self.d / 2}, got {self.r}.")
        _require(self.s <= self.r, f"s must not exceed r, got s={self.s}, r={self.r}.")
        # Unset exponents default to the optimal, quasi-uniform regime.
        if self.alpha is None:
            object.__setattr__(self, "alpha", 1.0 / self.d)
        if self.b is None:
            object.__setattr__(self, "b", self.r / self.d)
        if self.a is None:
            object.__setattr__(self, "a", self.b / self.r)

    @classmethod
    def from_fit(
        cls,
        r: float,
        s: float,
        fill_slope: float,
        sep_slope: float,
        wce_slope: float | None = None,
        weight_slope: float | None = None,
        d: int = 1,
    ) -> "RateInputs":
        """Exponents from fitted log-log slopes of h, q, e_n(H_{k_r}) and sum |w_i| against n."""
        alpha = min(-fill_slope, 1.0 / d)
        delta = min(fill_slope / sep_slope, 1.0)
        return cls(
            r=r,
            s=s,
            b=None if wce_slope is None else -wce_slope,
            c=0.0 if weight_slope is None else max(weight_slope, 0.0),
            a=-sep_slope,
            alpha=alpha,
            delta=delta,
            d=d,
        )

    def predict(self) -> Dict[str, float | DomainError]:
        """All four predictions keyed by formula name; a violated precondition is returned in place of its value."""
        predictors = {
            "weight_bound": lambda: rate_weight_bound(self.b, self.c, self.r, self.s),
            "sep_bound": lambda: rate_sep_bound(self.a, self.b, self.r, self.s),
            "bq_misspecified": lambda: rate_bq_misspecified(self.alpha, self.delta, self.r, self.s),
            "bq_wellspecified": lambda: rate_bq_wellspecified(self.alpha, self.r, self.d),
        }
        results = {}
        for name, predictor in predictors.items():
            try:
                results[name] = predictor()
            except DomainError as e:
                results[name] = e
        return results


FORMULAS = {
    "weight_bound": "b s / r - c (r - s) / r",
    "sep_bound": "min(b - a (r - s), a s)",
    "bq_misspecified": "alpha [r - (r - s) / delta]",
    "bq_wellspecified": "alpha r",
}

