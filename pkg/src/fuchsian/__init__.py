"""Nonuniform Fuchsian constellations: exact fields, hyperbolic geometry, domains and a PRA codec."""

__version__ = "0.1.0"
