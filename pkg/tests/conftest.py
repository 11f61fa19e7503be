import numpy as np
import pytest
from numpy.polynomial import legendre

from kquad.kernels import WendlandKernel

GAUSS_NODES = 64


def gauss_legendre(f, breakpoints, nodes: int = GAUSS_NODES) -> float:
    """Composite Gauss-Legendre rule with `nodes` nodes on every interval between consecutive breakpoints."""
    x, w = legendre.leggauss(nodes)
    breakpoints = sorted(set(float(b) for b in breakpoints))
    total = 0.0
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:], strict=True):
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        total += half * float(np.sum(w * f(mid + half * x)))
    return total


def kernel_mean_oracle(kernel: WendlandKernel, y: float) -> float:
    breakpoints = np.clip([0.0, y - kernel.scale, y, y + kernel.scale, 1.0], 0.0, 1.0)
    return gauss_legendre(lambda x: kernel(x, y), breakpoints)


def double_integral_oracle(kernel: WendlandKernel) -> float:
    """Tensor Gauss-Legendre rule, split at the kernel support inside and at delta and 1 - delta outside."""
    delta = kernel.scale
    return gauss_legendre(
        lambda ys: np.array([kernel_mean_oracle(kernel, y) for y in ys]), [0.0, delta, 1.0 - delta, 1.0]
    )


def random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.standard_normal((n, n))
    return m.T @ m + np.eye(n)


def jittered_grid(rng: np.random.Generator, n: int) -> np.ndarray:
    """Sorted points in [0, 1] that stay at least half a grid cell apart."""
    grid = (np.arange(n) + 0.5) / n
    return np.clip(grid + rng.uniform(-0.25, 0.25, size=n) / n, 0.0, 1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)
