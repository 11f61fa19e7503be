from .bq import BayesianQuadrature, bq_shortcut_square_error, bq_weights
from .core import (
    CLAMP_TOLERANCE,
    QuadratureMethod,
    QuadratureRule,
    WorstCaseReport,
    abs_weight_sum,
    quadrature_estimate,
    worst_case_error,
)
from .equal import EqualWeights, equal_weights