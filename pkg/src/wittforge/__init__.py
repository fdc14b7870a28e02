"""Invariants of powers of the fundamental ideal of the Witt ring."""

__version__ = "0.1.0"
