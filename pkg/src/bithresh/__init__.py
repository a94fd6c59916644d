"""Bi-threshold graph dynamical systems: simulation, phase spaces and checks."""

__version__ = "0.1.0"
