"""Exact computations with (filtered) quiver representations and their invariants."""

__version__ = "0.1.0"
