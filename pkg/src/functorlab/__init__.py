"""Exact homological algebra for functor categories over finite additive categories."""

__version__ = "0.1.0"
