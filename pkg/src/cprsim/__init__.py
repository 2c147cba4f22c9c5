"""Compressive phase retrieval from masked Fourier intensity measurements."""

__version__ = "0.3.0"
