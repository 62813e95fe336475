"""Exact and numerical tools for the cubic family of hypergeometric eta quotients."""

__version__ = "0.1.0"
