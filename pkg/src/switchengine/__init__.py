"""Measurement-driven qubit heat engine with a two-order switch."""

from .states import Family, InitialStateSpec

__all__ = ["Family", "InitialStateSpec"]
__version__ = "0.1.0"
