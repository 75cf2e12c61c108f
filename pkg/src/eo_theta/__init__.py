"""Exact finite-field toolkit for theta operators on EO strata of U(n-1,1)."""
__version__ = "0.1.0"
