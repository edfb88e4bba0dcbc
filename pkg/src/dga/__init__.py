"""Exact invariants of finite-dimensional connective dg quiver algebras."""

__version__ = "0.1.0"
