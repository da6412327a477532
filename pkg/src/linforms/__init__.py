"""Exact tools for the additive complexity of sets of linear forms."""

__version__ = "0.1.0"
