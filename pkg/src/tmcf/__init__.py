"""Exact continued-fraction and identity verification over GF(2) function fields."""

__version__ = "0.1.0"
