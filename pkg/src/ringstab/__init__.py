"""Exact computation with linear groups over finite rings."""
__version__ = "0.1.0"
