"""Finite sections of Helson matrices and their spectral diagnostics."""

__version__ = "0.1.0"
