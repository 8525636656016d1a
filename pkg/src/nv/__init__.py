"""Exact-arithmetic toolkit for Niemeier lattices, finite symplectic group
actions, and discriminant form verification."""

__version__ = "0.1.0"
