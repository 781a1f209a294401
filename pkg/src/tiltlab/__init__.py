"""Exact Temperley-Lieb calculus for SL2 tilting modules in mixed characteristic."""

__version__ = "0.1.0"
