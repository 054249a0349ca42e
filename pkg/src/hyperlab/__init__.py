"""Numerical laboratory for magnetic dynamics and wave transport on hyperbolic surfaces."""

__version__ = "0.1.0"
