"""Numerical laboratory for fractional Pauli and Hardy Lieb-Thirring inequalities."""

__version__ = "0.1.0"
