"""Harmonic equichordal and equi-isoclinic tight fusion frames."""

__version__ = "0.1.0"
