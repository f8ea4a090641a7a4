"""Exact generalized spectral factorization and quasi-tight framelet banks."""

__version__ = "0.1.0"
