"""Exception hierarchy.

Domain errors (bad input, excluded energies, unreachable cycles) map to CLI
exit code 2; numerical failures map to exit code 3.
"""

from __future__ import annotations


class DuffingError(Exception):
    """Base class for all package errors."""


class DomainError(DuffingError, ValueError):
    exit_code = 2


class NumericalFailure(DuffingError, RuntimeError):
    exit_code = 3


class NoRealOval(DomainError):
    pass


class CycleUnavailable(DomainError):
    pass


class SingularEnergy(DomainError):
    pass


class PathTooClose(DomainError):
    pass


class QuadratureFailure(NumericalFailure):
    pass


class StiffnessFailure(NumericalFailure):
    pass


class ExtrapolationFailure(NumericalFailure):
    pass


class FitFailure(NumericalFailure):
    def __init__(self, message: str, condition: float = float("nan")):
        super().__init__(message)
        self.condition = condition
