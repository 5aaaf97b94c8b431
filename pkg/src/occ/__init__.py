"""Verification engine for open-closed conformal field algebra structure."""

__version__ = "0.1.0"
