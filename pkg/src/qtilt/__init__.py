"""Exact homological certification toolkit for quotient path algebras over GF(p)."""

__version__ = "0.1.0"
