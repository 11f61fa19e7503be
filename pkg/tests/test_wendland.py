import numpy as np
import pytest
from conftest import double_integral_oracle, gauss_legendre, kernel_mean_oracle

from kquad.errors import DomainError, UnsupportedOrderError
from kquad.kernels import (
    SUPPORTED_ORDERS,
    WendlandKernel,
    eval_phi,
    kernel_double_integral_uniform01,
    kernel_eval,
    kernel_mean_uniform01,
    phi_antiderivative,
    phi_second_antiderivative,
    wendland_profile,
)
from kquad.linalg import SymMatrix, cholesky_factor


@pytest.mark.parametrize(("nu", "t", "expected"), [(0, 0.0, 1.0), (1, 1.0, 0.0), (3, 0.0, 15.0), (0, 0.25, 0.75)])
def test_eval_phi_values(nu, t, expected):
    assert eval_phi(nu, t) == pytest.approx(expected)


def test_eval_phi_at_zero():
    np.testing.assert_allclose([eval_phi(nu, 0.0) for nu in range(4)], [1.0, 1.0, 3.0, 15.0])


@pytest.mark.parametrize("nu", range(4))
def test_eval_phi_vanishes_outside_support(nu):
    t = np.array([1.0, 1.5, 7.0, 1e6])
    np.testing.assert_array_equal(eval_phi(nu, t), np.zeros_like(t))


def test_eval_phi_rejects_negative_argument():
    with pytest.raises(DomainError):
        eval_phi(1, -0.1)


@pytest.mark.parametrize("nu", [-1, 4])
def test_eval_phi_rejects_unsupported_nu(nu):
    with pytest.raises(UnsupportedOrderError):
        eval_phi(nu, 0.5)


@pytest.mark.parametrize("nu", range(4))
def test_profile_is_smooth_at_support_boundary(nu):
    inner = wendland_profile(nu).pieces[0]
    # phi_{1,nu} is C^{2 nu}: every derivative up to that order vanishes at t = 1 to match the zero piece.
    for k in range(2 * nu + 1):
        deriv = inner.deriv(k)
        assert abs(deriv(1.0)) <= 1e-12 * np.abs(deriv.coef).sum(), f"derivative {k}"


def test_kernel_eval_examples():
    assert kernel_eval(WendlandKernel(1, 0.1), 0.5, 0.5) == pytest.approx(1.0)
    assert kernel_eval(WendlandKernel(1, 0.1), 0.0, 0.05) == pytest.approx(0.5)
    assert kernel_eval(WendlandKernel(4, 0.1), 0.0, 0.2) == 0.0


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_kernel_symmetry_and_support(order, rng):
    kernel = WendlandKernel(order, 0.1)
    x, y = rng.uniform(0, 1, size=200), rng.uniform(0, 1, size=200)
    np.testing.assert_array_equal(kernel(x, y), kernel(y, x))
    far = np.abs(x - y) >= kernel.scale
    np.testing.assert_array_equal(kernel(x, y)[far], 0.0)
    np.testing.assert_allclose(kernel(x, x), eval_phi(kernel.nu, 0.0))


def test_gram_matches_pointwise_evaluation(rng):
    kernel = WendlandKernel(3, 0.2)
    x, y = rng.uniform(0, 1, size=7), rng.uniform(0, 1, size=5)
    gram = kernel.gram(x, y)
    assert gram.shape == (7, 5)
    assert gram[2, 4] == pytest.approx(kernel(x[2], y[4]))
    np.testing.assert_array_equal(kernel.gram(x), kernel.gram(x).T)


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_gram_is_positive_definite_on_distinct_points(order, rng):
    kernel = WendlandKernel(order, 0.1)
    for _ in range(100):
        points = np.unique(rng.uniform(0, 1, size=rng.integers(2, 65)))
        factor = cholesky_factor(SymMatrix(kernel.gram(points)))
        assert np.all(factor.pivots > 0)


def test_kernel_rejects_bad_parameters():
    with pytest.raises(UnsupportedOrderError):
        WendlandKernel(5)
    with pytest.raises(DomainError):
        WendlandKernel(2, 0.0)


def test_phi_antiderivative_examples():
    assert phi_antiderivative(0, 1.0) == pytest.approx(0.5)
    assert phi_antiderivative(1, 0.0) == 0.0
    oracle = gauss_legendre(lambda t: (1 - t) ** 5 * (24 * t**2 + 15 * t + 3), [0.0, 1.0])
    assert phi_antiderivative(2, 1.0) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("nu", range(4))
def test_phi_antiderivatives_match_oracle(nu):
    for u in (0.1, 0.5, 0.9, 1.0):
        psi = gauss_legendre(lambda t: eval_phi(nu, t), [0.0, u])
        assert phi_antiderivative(nu, u) == pytest.approx(psi, abs=1e-12)
        theta = gauss_legendre(lambda v: phi_antiderivative(nu, v), [0.0, u])
        assert phi_second_antiderivative(nu, u) == pytest.approx(theta, abs=1e-12)


def test_phi_antiderivative_rejects_out_of_range():
    with pytest.raises(DomainError):
        phi_antiderivative(1, 1.5)
    with pytest.raises(DomainError):
        phi_second_antiderivative(1, -0.5)


def test_kernel_mean_examples():
    kernel = WendlandKernel(1, 0.1)
    assert kernel_mean_uniform01(kernel, 0.5) == pytest.approx(0.1)
    assert kernel_mean_uniform01(kernel, 0.0) == pytest.approx(0.05)


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_kernel_mean_is_mirror_symmetric(order):
    kernel = WendlandKernel(order, 0.1)
    y = np.linspace(0, 1, 101)
    np.testing.assert_allclose(kernel.mean(y), kernel.mean(1 - y), atol=1e-13)


def test_kernel_mean_matches_oracle(rng):
    orders = rng.choice(SUPPORTED_ORDERS, size=1000)
    ys = rng.uniform(0, 1, size=1000)
    for order, y in zip(orders, ys, strict=True):
        kernel = WendlandKernel(int(order), 0.1)
        assert abs(kernel_mean_uniform01(kernel, y) - kernel_mean_oracle(kernel, y)) <= 1e-10


def test_kernel_mean_requires_small_scale():
    with pytest.raises(DomainError):
        kernel_mean_uniform01(WendlandKernel(1, 0.6), 0.5)


def test_double_integral_example():
    theta = phi_second_antiderivative(0, 1.0)
    expected = 0.1 - 2 * 0.1**2 * (0.5 - theta)
    assert kernel_double_integral_uniform01(WendlandKernel(1, 0.1)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.0966666666667, abs=1e-12)


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
@pytest.mark.parametrize("scale", [0.1, 0.3, 0.5])
def test_double_integral_matches_oracle(order, scale):
    kernel = WendlandKernel(order, scale)
    value = kernel.double_integral()
    assert value > 0
    assert abs(value - double_integral_oracle(kernel)) <= 1e-10


@pytest.mark.parametrize("order", SUPPORTED_ORDERS)
def test_double_integral_is_integral_of_mean(order):
    kernel = WendlandKernel(order, 0.1)
    fubini = gauss_legendre(kernel.mean, [0.0, 0.1, 0.9, 1.0])
    assert abs(kernel.double_integral() - fubini) <= 1e-10
