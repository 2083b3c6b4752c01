"""Exact Maurer-Cartan calculus, twisting procedures and twisted operad homology."""

__version__ = "0.1.0"
