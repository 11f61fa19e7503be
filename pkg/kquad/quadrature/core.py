import abc
import dataclasses
from typing import Callable

import numpy as np

from kquad.designs import DesignSet
from kquad.errors import NumericalBreakdownError
from kquad.kernels import WendlandKernel

# e^2 in [-CLAMP_TOLERANCE * first_term, 0) is treated as roundoff and clamped to zero.
CLAMP_TOLERANCE = 1e-8
# Multiple of eps * (sum of absolute terms) below which a positive e^2 is indistinguishable from rounding noise.
RESOLUTION_FACTOR = 10.0


@dataclasses.dataclass(frozen=True)
class QuadratureRule:
    design: DesignSet
    weights: np.ndarray
    scale: float
    construction_order: int | None = None  # None for rules not built from a kernel.
    condition_proxy: float = float("nan")

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64).reshape(-1)
        if weights.shape[0] != self.design.n:
            raise ValueError(f"Got {weights.shape[0]} weights for {self.design.n} design points.")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def points(self) -> np.ndarray:
        return self.design.points

    @property
    def n(self) -> int:
        return self.design.n


@dataclasses.dataclass(frozen=True)
class WorstCaseReport:
    wce: float
    raw_square: float
    eval_order: int
    condition_proxy: float
    rounding_bound: float = 0.0

    @property
    def clamped(self) -> bool:
        return self.raw_square < 0

    @property
    def resolved(self) -> bool:
        return self.raw_square > self.rounding_bound


class QuadratureMethod(abc.ABC):
    """A way of turning design points into a weighted quadrature rule."""

    @abc.abstractmethod
    def build(self, design: DesignSet) -> QuadratureRule:
        raise NotImplementedError


def _rounding_bound(first: float, w: np.ndarray, mean: np.ndarray, gram: np.ndarray) -> float:
    magnitude = first + 2.0 * np.abs(w) @ np.abs(mean) + np.abs(w) @ np.abs(gram) @ np.abs(w)
    return float(RESOLUTION_FACTOR * np.finfo(np.float64).eps * magnitude)


def worst_case_error(rule: QuadratureRule, s: int) -> WorstCaseReport:
    """
    Worst case error of the rule in the RKHS of k_s, using the same scale the rule was built with:

        e^2 = int int k_s dP dP - 2 sum_i w_i m_s(X_i) + sum_ij w_i w_j k_s(X_i, X_j)
    """
    kernel = WendlandKernel(s, rule.scale)
    w = rule.weights
    first = kernel.double_integral()
    mean, gram = kernel.mean(rule.points), kernel.gram(rule.points)
    cross = w @ mean
    quad = w @ gram @ w
    raw_square = float(first - 2.0 * cross + quad)
    if raw_square < -CLAMP_TOLERANCE * first:
        raise NumericalBreakdownError(raw_square, first)
    return WorstCaseReport(
        wce=float(np.sqrt(max(raw_square, 0.0))),
        raw_square=raw_square,
        eval_order=s,
        condition_proxy=rule.condition_proxy,
        rounding_bound=_rounding_bound(first, w, mean, gram),
    )


def quadrature_estimate(rule: QuadratureRule, f: Callable[[np.ndarray], np.ndarray]) -> float:
    """P_n f = sum_i w_i f(X_i). f is called once on the array of design points."""
    values = np.asarray(f(rule.points), dtype=np.float64)
    return float(rule.weights @ np.broadcast_to(values, rule.weights.shape))


def abs_weight_sum(rule: QuadratureRule) -> float:
    return float(np.sum(np.abs(rule.weights)))
