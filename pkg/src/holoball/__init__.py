"""Hyperbolic geometry of the complex unit ball and boundary open-mapping checks."""

__version__ = "0.1.0"
