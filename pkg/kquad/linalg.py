"""
Dense symmetric positive definite factorization and solves.

Kernel matrices are small enough at the scales we study (n <= a few thousand) that a dense LAPACK Cholesky is
the simplest backward stable choice. Compact support is not exploited.
"""

import dataclasses

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from kquad.errors import NotPositiveDefiniteError


@dataclasses.dataclass(frozen=True)
class SymMatrix:
    """A symmetric matrix stored through its upper triangle."""

    upper: np.ndarray

    def __post_init__(self):
        upper = np.asarray(self.upper, dtype=np.float64)
        if upper.ndim != 2 or upper.shape[0] != upper.shape[1] or upper.shape[0] < 1:
            raise ValueError(f"SymMatrix requires a non-empty square array, got shape {upper.shape}.")
        upper = np.triu(upper)
        upper.setflags(write=False)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "SymMatrix":
        # Only the upper triangle is read, so the result is symmetric whatever the lower triangle holds.
        return cls(np.asarray(a, dtype=np.float64))

    @property
    def order(self) -> int:
        return self.upper.shape[0]

    def full(self) -> np.ndarray:
        return self.upper + np.triu(self.upper, k=1).T

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.full() @ np.asarray(x, dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class LowerTriangularFactor:
    lower: np.ndarray
    jitter: float = 0.0

    @property
    def order(self) -> int:
        return self.lower.shape[0]

    @property
    def pivots(self) -> np.ndarray:
        return np.diag(self.lower)

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.order:
            raise ValueError(f"Right hand side has length {b.shape[0]}, expected {self.order}.")
        return linalg.cho_solve((self.lower, True), b, check_finite=False)


def cholesky_factor(a: SymMatrix, jitter: float = 0.0) -> LowerTriangularFactor:
    """
    Factor A (+ jitter * I) = L L^T.

    jitter defaults to 0 so that weights are the plain K^{-1} z; a positive value is only meant for exploratory runs.
    """
    dense = a.full()
    if jitter:
        dense = dense + jitter * np.eye(a.order)
    lower, info = lapack.dpotrf(dense, lower=1, clean=0)
    if info > 0:
        # dpotrf stops at the first nonpositive Schur complement and leaves it on the diagonal.
        raise NotPositiveDefiniteError(int(info), float(lower[info - 1, info - 1]))
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}.")
    lower = np.tril(lower)
    if np.any(np.diag(lower) <= 0):
        index = int(np.argmax(np.diag(lower) <= 0)) + 1
        raise NotPositiveDefiniteError(index, float(np.diag(lower)[index - 1]))
    return LowerTriangularFactor(lower=lower, jitter=float(jitter))


def solve_spd(a: SymMatrix, b: np.ndarray, jitter: float = 0.0) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != a.order:
        raise ValueError(f"Right hand side has length {b.shape[0]}, expected {a.order}.")
    return cholesky_factor(a, jitter=jitter).solve(b)


def condition_diagnostic(factor: LowerTriangularFactor) -> float:
    """(max pivot / min pivot)^2, a cheap proxy for the condition number of L L^T."""
    pivots = np.abs(factor.pivots)
    return float((pivots.max() / pivots.min()) ** 2)
