"""Exact resultant-based design of maximally flat reduced-delay FIR filters."""

__version__ = "0.1.0"
