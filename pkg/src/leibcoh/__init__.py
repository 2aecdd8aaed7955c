"""Exact cohomology of Leibniz and Lie algebras given by structure constants."""

__version__ = "0.1.0"
