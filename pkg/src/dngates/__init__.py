"""Circuits for D_N lattice gauge theory, checked against exact group oracles."""
__version__ = "0.1.0"
