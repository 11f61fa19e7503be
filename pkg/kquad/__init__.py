"""Bayesian quadrature in Sobolev RKHSs under smoothness misspecification."""

__version__ = "0.1.0"
