"""Exception hierarchy shared by every mellinkit module."""

from __future__ import annotations


class MellinError(Exception):
    """Base class for all numerical and usage errors raised by mellinkit."""

    #: Column in a DSL expression the error is attributed to, if any.
    position: int | None = None


class DomainError(MellinError, ValueError):
    """Argument outside the domain of an operation (non-finite input, Re(z) <= 0, ...)."""


class PoleError(DomainError):
    """Argument too close to a pole of the function being evaluated."""


class NonFiniteIntegrand(MellinError, ArithmeticError):
    """A quadrature node produced NaN or Inf."""


class NonFiniteTerm(MellinError, ArithmeticError):
    """A series term evaluated to NaN or Inf."""


class NoConvergence(MellinError, ArithmeticError):
    """Refinement or summation stopped before reaching the requested tolerance.

    ``partial`` carries the best available ValueWithError, when there is one.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(MellinError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class UnboundVariable(MellinError, NameError):
    def __init__(self, name: str, position: int | None = None):
        super().__init__(f"unbound variable {name!r}")
        self.name = name
        self.position = position


class UnknownIdentity(MellinError, KeyError):
    def __str__(self) -> str:
        return f"unknown identity {self.args[0]!r}"
