"""Indel Entropy - exact entropies of deletion and insertion channels."""

__version__ = "0.1.0"
