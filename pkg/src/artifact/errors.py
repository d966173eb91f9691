"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """Bad input: wrong shape, violated precondition, malformed file."""


class InconsistencyError(RuntimeError):
    """Two criteria that must agree mathematically disagreed numerically."""
