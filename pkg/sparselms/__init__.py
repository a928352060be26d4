"""Regularized LMS/NLMS adaptive filters for sparse system identification."""

__version__ = "1.0.0"
