"""Degenerate Chenciner bifurcation analysis for truncated planar normal forms."""

__version__ = "0.1.0"
