class KQuadError(Exception):
    """Base class for all errors raised by kquad."""


class UnsupportedOrderError(KQuadError, ValueError):
    pass


class DomainError(KQuadError, ValueError):
    pass


class GuaranteeVoidError(DomainError):
    """The misspecified BQ rate has a nonpositive exponent (delta <= 1 - s/r)."""


class DesignError(KQuadError, ValueError):
    pass


class ConfigError(KQuadError, ValueError):
    pass


class FitUnavailableError(KQuadError, ValueError):
    pass


class NotPositiveDefiniteError(KQuadError, ArithmeticError):
    def __init__(self, index: int, pivot: float, context: str | None = None):
        self.index = index  # 1-based, as reported by LAPACK
        self.pivot = pivot
        self.context = context
        message = f"Matrix is not positive definite: pivot {index} has value {pivot:.6g}"
        if context is not None:
            message += f" ({context})"
        super().__init__(message)

    def with_context(self, context: str) -> "NotPositiveDefiniteError":
        return NotPositiveDefiniteError(self.index, self.pivot, context=context)


class NumericalBreakdownError(KQuadError, ArithmeticError):
    def __init__(self, raw_square: float, first_term: float):
        self.raw_square = raw_square
        self.first_term = first_term
        super().__init__(
            f"Squared worst case error {raw_square:.6g} is below the clamp tolerance "
            f"(-1e-8 * {first_term:.6g}); the three-term formula cancelled catastrophically."
        )
