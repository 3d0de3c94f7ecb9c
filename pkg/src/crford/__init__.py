"""Certified computations for complex hyperbolic triangle groups and Ford domains."""

__version__ = "0.1.0"
