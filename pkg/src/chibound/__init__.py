"""Certified colorings for graphs built from a chi-bounded class."""

__version__ = "0.1.0"
