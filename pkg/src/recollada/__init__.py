"""Exact computations with recollements of triangular matrix algebras."""

__version__ = "0.1.0"
