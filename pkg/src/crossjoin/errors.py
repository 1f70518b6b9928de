"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CrossJoinError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CrossJoinError, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidCycleError(DomainError):
    """A vertex sequence is not a Hamiltonian cycle of the digraph.

    ``position`` is the 1-based position of the offending entry when one
    can be named (for a broken edge, the position the edge enters).
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class InvalidMoveError(DomainError):
    """A cross-join move does not satisfy its preconditions on a cycle."""


class UnsupportedOperationError(CrossJoinError):
    """The operation is not defined for these parameters (e.g. d does not divide N)."""


class BudgetExceededError(CrossJoinError):
    """Enumeration would exceed the configured resource budget."""


class InvariantViolationError(CrossJoinError):
    """An internal self-check failed. This always indicates a bug."""
