"""Numerical laboratory for gauge-theoretic Poisson structures on real and complex surfaces."""

__version__ = "0.1.0"
