"""Elliptic curve configurations on Fano surfaces of cubic threefolds, in exact arithmetic."""

__version__ = "0.1.0"
