from .wendland import (
    DEFAULT_SCALE,
    SUPPORTED_ORDERS,
    PiecewisePolynomial,
    WendlandKernel,
    eval_phi,
    kernel_double_integral_uniform01,
    kernel_eval,
    kernel_mean_uniform01,
    phi_antiderivative,
    phi_second_antiderivative,
    wendland_profile,
)
