"""
Exception hierarchy for gueedge.
"""

from typing import Optional


class GueEdgeError(Exception):
    """Base class for every error raised by gueedge."""


class RegimeError(GueEdgeError, ValueError):
    """A parameter lies outside the regime an operation supports."""

    def __init__(self, name: str, value: object, requirement: str):
        self.name = name
        self.value = value
        self.requirement = requirement
        super().__init__(f"{name}={value!r} violates {requirement}")


class SingularSystemError(GueEdgeError, ArithmeticError):
    """I - A is singular, or its determinant is not positive."""

    def __init__(self, message: str, determinant: Optional[float] = None):
        self.determinant = determinant
        super().__init__(message)


class ConvergenceError(GueEdgeError, RuntimeError):
    """An iterative solve stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (final residual {residual:.3e})")


class NumericalFailure(GueEdgeError, ArithmeticError):
    """Non-finite values or a failed factorization."""
