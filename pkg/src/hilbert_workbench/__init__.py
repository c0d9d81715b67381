"""Hilbert polynomials of polarized families and the coincidences between them."""

__version__ = "0.1.0"
