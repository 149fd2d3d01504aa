"""Exact computation with Euclidean crystallographic groups, finite group
actions on complex tori, and the resulting quotient orbifolds."""

__version__ = "0.1.0"
