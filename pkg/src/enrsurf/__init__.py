"""Exact-arithmetic toolkit for elliptic fibrations over the s-line,
Enriques quotient constructions, and fiber-bisection configuration counts."""

__version__ = "0.1.0"
