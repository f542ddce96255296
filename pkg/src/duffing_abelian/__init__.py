"""Abelian integrals of the Duffing oscillator ``H = y^2/2 - x^2/2 + x^4/4``.

Periods of ``x^i y dx`` over the exterior oval, their analytic continuation
to the cut plane, zero counts of ``M = l0 I0 + l2 I2 + l4 I4'`` and scans of
the parameter space.
"""

from __future__ import annotations

from .errors import DomainError, DuffingError, NumericalFailure
from .kernels import BACKEND
from .level_curve import Cycle, CycleSpec, Side, integrate_cycle, integrate_cycle_derivative
from .picard_fuchs import PeriodVector, evaluate
from .monodromy import boundary_value
from .zeros import KeyholeContour, MelnikovParams, Status, ZeroCount, count_zeros, petrov_bound
from .atlas import ScanResult, classify_point, scan

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Cycle", "CycleSpec", "DomainError", "DuffingError", "KeyholeContour",
    "MelnikovParams", "NumericalFailure", "PeriodVector", "ScanResult", "Side", "Status",
    "ZeroCount", "boundary_value", "classify_point", "count_zeros", "evaluate",
    "integrate_cycle", "integrate_cycle_derivative", "petrov_bound", "scan",
]
