"""Computational checks for the finite field Kakeya problem."""

__version__ = "0.1.0"
