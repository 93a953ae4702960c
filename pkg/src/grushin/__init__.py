"""Numerical experiments on the failure of null-controllability for Grushin-type operators."""

__version__ = "0.1.0"
