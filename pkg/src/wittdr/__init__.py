"""Exact Witt-vector, divided-power and Cech computations over small rings."""

__version__ = "0.1.0"
