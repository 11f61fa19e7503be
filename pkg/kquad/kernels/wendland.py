"""
Wendland kernels on [0, 1] and their exact integrals against the uniform measure.

The one dimensional Wendland functions are

    phi_{1,0}(t) = (1 - t)_+
    phi_{1,1}(t) = (1 - t)_+^3 (3t + 1)
    phi_{1,2}(t) = (1 - t)_+^5 (24t^2 + 15t + 3)
    phi_{1,3}(t) = (1 - t)_+^7 (315t^3 + 285t^2 + 105t + 15)

with (u)_+ = max(0, u). The kernel of order r is k_r(x, y) = phi_{1,r-1}(|x - y| / delta), whose RKHS is
norm-equivalent to the Sobolev space H^r.
"""

import dataclasses
import functools
from typing import Tuple

import numpy as np
from numpy.polynomial import Polynomial

from kquad.errors import DomainError, UnsupportedOrderError

SUPPORTED_NU = (0, 1, 2, 3)
SUPPORTED_ORDERS = tuple(nu + 1 for nu in SUPPORTED_NU)
DEFAULT_SCALE = 0.1

# Low-to-high coefficients of the factor multiplying (1 - t)^exponent.
_WENDLAND_FACTORS = {
    0: (1, (1.0,)),
    1: (3, (1.0, 3.0)),
    2: (5, (3.0, 15.0, 24.0)),
    3: (7, (15.0, 105.0, 285.0, 315.0)),
}


@dataclasses.dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces on consecutive intervals [breakpoints[i], breakpoints[i + 1])."""

    pieces: Tuple[Polynomial, ...]
    breakpoints: Tuple[float, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.pieces) + 1:
            raise ValueError(f"Expected {len(self.pieces) + 1} breakpoints, got {len(self.breakpoints)}.")
        if any(lo >= hi for lo, hi in zip(self.breakpoints[:-1], self.breakpoints[1:], strict=True)):
            raise ValueError(f"Breakpoints must be strictly increasing, got {self.breakpoints}.")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        flat = np.atleast_1d(t).ravel()
        idx = np.searchsorted(self.breakpoints, flat, side="right") - 1
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        out = np.zeros_like(flat)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece(flat[mask])
        return out.reshape(t.shape)

    def derivative(self, k: int = 1) -> "PiecewisePolynomial":
        return PiecewisePolynomial(tuple(piece.deriv(k) for piece in self.pieces), self.breakpoints)

    def antiderivative(self) -> "PiecewisePolynomial":
        """The continuous antiderivative that vanishes at the first breakpoint."""
        pieces, value = [], 0.0
        for piece, lo, hi in zip(self.pieces, self.breakpoints[:-1], self.breakpoints[1:], strict=True):
            anti = piece.integ(k=[value], lbnd=lo)
            pieces.append(anti)
            if np.isfinite(hi):
                value = float(anti(hi))
        return PiecewisePolynomial(tuple(pieces), self.breakpoints)


def _check_nu(nu: int) -> None:
    if nu not in SUPPORTED_NU:
        raise UnsupportedOrderError(f"Wendland function phi_{{1,{nu}}} is not supported, nu must be in {SUPPORTED_NU}.")


@functools.cache
def wendland_profile(nu: int) -> PiecewisePolynomial:
    """phi_{1,nu} as a polynomial on [0, 1) and zero on [1, inf)."""
    _check_nu(nu)
    exponent, factor = _WENDLAND_FACTORS[nu]
    inner = Polynomial([1.0, -1.0]) ** exponent * Polynomial(factor)
    return PiecewisePolynomial((inner, Polynomial([0.0])), (0.0, 1.0, np.inf))


@functools.cache
def _antiderivative(nu: int, times: int) -> PiecewisePolynomial:
    profile = wendland_profile(nu)
    for _ in range(times):
        profile = profile.antiderivative()
    return profile


def _maybe_scalar(value: np.ndarray, like):
    return float(value) if np.ndim(like) == 0 else value


def eval_phi(nu: int, t):
    _check_nu(nu)
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0):
        raise DomainError(f"phi_{{1,{nu}}} is only defined for t >= 0, got min(t) = {np.min(t_arr)}.")
    return _maybe_scalar(wendland_profile(nu)(t_arr), t)


def _check_unit_interval(name: str, u) -> np.ndarray:
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr < 0) or np.any(u_arr > 1) or np.any(np.isnan(u_arr)):
        raise DomainError(f"{name} must lie in [0, 1], got {u}.")
    return u_arr


def phi_antiderivative(nu: int, u):
    """Psi_nu(u) = int_0^u phi_{1,nu}(t) dt for u in [0, 1]."""
    _check_nu(nu)
    u_arr = _check_unit_interval("u", u)
    return _maybe_scalar(_antiderivative(nu, 1)(u_arr), u)


def phi_second_antiderivative(nu: int, u):
    """Theta_nu(u) = int_0^u Psi_nu(t) dt for u in [0, 1]."""
    _check_nu(nu)
    u_arr = _check_unit_interval("u", u)
    return _maybe_scalar(_antiderivative(nu, 2)(u_arr), u)


@dataclasses.dataclass(frozen=True)
class WendlandKernel:
    order: int
    scale: float = DEFAULT_SCALE

    def __post_init__(self):
        if self.order not in SUPPORTED_ORDERS:
            raise UnsupportedOrderError(f"Kernel order must be in {SUPPORTED_ORDERS}, got {self.order}.")
        if not self.scale > 0:
            raise DomainError(f"Kernel scale must be positive, got {self.scale}.")

    @property
    def nu(self) -> int:
        return self.order - 1

    def __call__(self, x, y):
        return kernel_eval(self, x, y)

    def gram(self, x: np.ndarray, y: np.ndarray | None = None) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        y = x if y is None else np.asarray(y, dtype=np.float64)
        return kernel_eval(self, x[:, None], y[None, :])

    def mean(self, y):
        return kernel_mean_uniform01(self, y)

    def double_integral(self) -> float:
        return kernel_double_integral_uniform01(self)


def kernel_eval(kernel: WendlandKernel, x, y):
    t = np.abs(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)) / kernel.scale
    value = wendland_profile(kernel.nu)(t)
    return float(value) if np.ndim(value) == 0 else value


def _check_truncation(kernel: WendlandKernel) -> None:
    # The boundary truncation formula assumes the support reaches at most one end of [0, 1].
    if kernel.scale > 0.5:
        raise DomainError(f"Closed form kernel means require scale <= 0.5, got {kernel.scale}.")


def kernel_mean_uniform01(kernel: WendlandKernel, y):
    """m_P(y) = int_0^1 k(y, x) dx for P = Uniform[0, 1]."""
    _check_truncation(kernel)
    y_arr = _check_unit_interval("y", y)
    delta = kernel.scale
    left = np.minimum(y_arr / delta, 1.0)
    right = np.minimum((1.0 - y_arr) / delta, 1.0)
    psi = _antiderivative(kernel.nu, 1)
    return _maybe_scalar(delta * (psi(left) + psi(right)), y)


def kernel_double_integral_uniform01(kernel: WendlandKernel) -> float:
    """int_0^1 int_0^1 k(x, y) dx dy, integrating the piecewise polynomial kernel mean exactly."""
    _check_truncation(kernel)
    delta = kernel.scale
    # Each half of m_P is delta * Psi(y / delta) on [0, delta] and delta * Psi(1) beyond.
    psi_one = float(_antiderivative(kernel.nu, 1)(1.0))
    theta_one = float(_antiderivative(kernel.nu, 2)(1.0))
    return 2.0 * delta * (delta * theta_one + (1.0 - delta) * psi_one)
