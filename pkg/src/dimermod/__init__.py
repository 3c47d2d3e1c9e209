"""Cluster modular groups of dimer integrable systems, with exact arithmetic."""

__version__ = "0.1.0"
