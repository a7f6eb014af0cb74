"""Exact symbolic audit of boundary noncommutative-residue computations for Dirac operators."""

__version__ = "0.1.0"
