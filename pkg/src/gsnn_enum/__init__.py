"""Enumerate and classify irreducible G-invariant shallow ReLU architectures."""

__version__ = "0.1.0"
