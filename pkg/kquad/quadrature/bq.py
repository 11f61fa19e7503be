import dataclasses

from kquad.designs import DesignSet
from kquad.errors import NotPositiveDefiniteError
from kquad.kernels import DEFAULT_SCALE, WendlandKernel
from kquad.linalg import SymMatrix, cholesky_factor, condition_diagnostic

from .core import QuadratureMethod, QuadratureRule


def bq_weights(r: int, scale: float, design: DesignSet, jitter: float = 0.0) -> QuadratureRule:
    """Bayesian quadrature weights w = K^{-1} z with K_ij = k_r(X_i, X_j) and z_i = m_P(X_i)."""
    kernel = WendlandKernel(r, scale)
    gram = SymMatrix.from_dense(kernel.gram(design.points))
    try:
        factor = cholesky_factor(gram, jitter=jitter)
    except NotPositiveDefiniteError as e:
        raise e.with_context(f"r={r}, n={design.n}, design={design.label}") from e
    z = kernel.mean(design.points)
    return QuadratureRule(
        design=design,
        weights=factor.solve(z),
        scale=scale,
        construction_order=r,
        condition_proxy=condition_diagnostic(factor),
    )


def bq_shortcut_square_error(rule: QuadratureRule) -> float:
    """e^2 = int int k_r dP dP - z^T w, valid for BQ rules evaluated in their own RKHS."""
    if rule.construction_order is None:
        raise ValueError("The shortcut identity needs a rule built by Bayesian quadrature.")
    kernel = WendlandKernel(rule.construction_order, rule.scale)
    return float(kernel.double_integral() - kernel.mean(rule.points) @ rule.weights)


@dataclasses.dataclass(frozen=True)
class BayesianQuadrature(QuadratureMethod):
    order: int
    scale: float = DEFAULT_SCALE
    jitter: float = 0.0

    def build(self, design: DesignSet) -> QuadratureRule:
        return bq_weights(self.order, self.scale, design, jitter=self.jitter)
