"""Boundary values on the cut, Picard-Lefschetz relations and Wronskians.

Sign conventions (fixed against quadrature): the vanishing cycle at
h = 0 carries ``delta0 = 2i * int sqrt(-Q) dx`` over ``[-x1, x1]``, so that
on ``(-1/4, 0)``

    I+(h) = delta0(h) + delta1(h) + delta-1(h),  I-(h) = conj(I+(h)),

with real lobe integrals ``delta1 = delta-1 > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import picard_fuchs as pf
from .errors import ExtrapolationFailure, PathTooClose, SingularEnergy
from .level_curve import Cycle, CycleSpec, Side, integrate_cycle

RICHARDSON_LEVELS = 5
RICHARDSON_TOL = 1e-6
# reference energy for the vanishing-cycle quadratures
CYCLE_BASE = -0.125
CYCLE_GUARD = 0.04


@dataclass(frozen=True)
class BoundaryValue:
    h: float
    side: Side
    I0: complex
    I2: complex
    I4p: complex
    error: float = 0.0

    def conj(self) -> "BoundaryValue":
        other = Side.LOWER if self.side is Side.UPPER else Side.UPPER
        return BoundaryValue(self.h, other, self.I0.conjugate(), self.I2.conjugate(),
                             self.I4p.conjugate(), self.error)

    @property
    def I0_prime(self) -> complex:
        a = pf.pf_matrix(self.h)
        return complex(a[0, 0] * self.I0 + a[0, 1] * self.I2)


def _offset_base(h: float) -> float:
    return min(1e-2, min(abs(h), abs(h + 0.25)) / 20.0)


def richardson(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Extrapolate ``values[k] = f(d 2^-k)`` to ``d = 0`` for ``f`` smooth in d.

    Returns the extrapolated vector and the size of the last correction.
    """
    table = [np.asarray(v, dtype=complex) for v in values]
    err = math.inf
    for j in range(1, len(table)):
        fac = 2.0 ** j - 1.0
        new = [table[k] + (table[k] - table[k - 1]) / fac for k in range(1, len(table))]
        if len(new) == 1:
            err = float(np.max(np.abs(new[0] - table[-1])))
        table = new
    return table[-1], err


def boundary_value(h: float, side: Side = Side.UPPER, levels: int = RICHARDSON_LEVELS,
                   tol: float = RICHARDSON_TOL) -> BoundaryValue:
    """Limit of the exterior periods as ``h + i*eps`` (upper) or ``h - i*eps``
    (lower) approaches a point of the cut.

    Inside the local discs around 0 and -1/4 the limit is read off the
    local series. Elsewhere it is Richardson-extrapolated from
    continuation values at offsets ``d * 2**-k``, ``k = 0..levels-1``,
    ``d = min(1e-2, dist/20)``.
    """
    h = float(h)
    if h >= 0:
        raise PathTooClose(f"h = {h} is not on the cut (-inf, 0)")
    if h == -0.25:
        raise SingularEnergy("I4' is singular at h = -1/4; use saddle_value")
    if side is Side.LOWER:
        return boundary_value(h, Side.UPPER, levels, tol).conj()
    if side is not Side.UPPER:
        raise ValueError("side must be UPPER or LOWER")
    if min(abs(h), abs(h + 0.25)) < pf.LOCAL_RADIUS:
        v = pf.evaluate_upper_closure(complex(h, 0.0))
        return BoundaryValue(h, Side.UPPER, v.I0, v.I2, v.i4prime, 0.0)
    d = _offset_base(h)
    samples = []
    for k in range(levels):
        v = pf.evaluate(complex(h, d * 2.0 ** -k))
        samples.append((v.I0, v.I2))
    (i0, i2), err = richardson(np.array(samples))
    scale = max(abs(i0), abs(i2))
    rel = err / scale
    if not rel < tol:
        raise ExtrapolationFailure(
            f"boundary value at h = {h}: extrapolation error {rel:.2e} exceeds {tol:.1e}")
    i0, i2 = complex(i0), complex(i2)
    return BoundaryValue(h, Side.UPPER, i0, i2, (4 * h * i0 + 5 * i2) / (4 * h + 1), rel)


def saddle_value(side: Side = Side.UPPER) -> tuple[complex, complex]:
    """``(I0, I2)`` at h = -1/4 as the limit along the cut from ``side``."""
    i0, i2 = pf.local_expansion(-0.25).at_center()
    if side is Side.LOWER:
        return i0.conjugate(), i2.conjugate()
    return i0, i2


# -- vanishing cycles -------------------------------------------------------

def cycle_quadrature(cycle: Cycle, h: float) -> tuple[complex, complex]:
    spec = CycleSpec(cycle)
    return complex(integrate_cycle(spec, 0, h)), complex(integrate_cycle(spec, 2, h))


def _cycle_path(h: float, side: Side) -> list[complex]:
    sgn = 1.0 if side is Side.UPPER else -1.0
    height = 0.05 if -0.25 < h < 0 else 0.5
    pts = [complex(CYCLE_BASE), complex(CYCLE_BASE, sgn * height),
           complex(h, sgn * height), complex(h)]
    for a, b in zip(pts[:-1], pts[1:]):
        for c in (0j, -0.25 + 0j):
            if pf._dist_point_segment(c, a, b) < CYCLE_GUARD:
                raise PathTooClose(f"cycle continuation to h = {h} passes within "
                                   f"{CYCLE_GUARD} of a critical value")
    return pts


def continue_cycle(cycle: Cycle, h: float, side: Side) -> tuple[complex, complex]:
    """Period of a vanishing cycle at real ``h``, continued from its
    quadrature at h = -1/8 through the ``side`` half-plane."""
    pts = _cycle_path(float(h), side)
    y = cycle_quadrature(cycle, CYCLE_BASE)
    for a, b in zip(pts[:-1], pts[1:]):
        y, _, _ = pf.integrate_piece(0, a, b, 0.0, 0.0, 0.0, y)
    return y


@dataclass
class CycleReport:
    h: float
    residuals: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def passed(self, tol: float = 1e-5) -> bool:
        return self.max_residual < tol


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def verify_cycle_relations(h: float) -> CycleReport:
    """Relative residuals of the cut relations at ``h`` for the forms
    ``y dx`` and ``x^2 y dx``.

    On ``(-1/4, 0)``: ``gplus``, ``gminus1`` (with quadratures of all three
    vanishing cycles) and ``d1``. On ``(-inf, -1/4)``: ``gplus``,
    ``gminus2`` and ``d1`` with vanishing cycles continued from -1/8.
    """
    h = float(h)
    report = CycleReport(h)
    up = boundary_value(h, Side.UPPER)
    lo = boundary_value(h, Side.LOWER)
    gp = np.array([up.I0, up.I2])
    gm = np.array([lo.I0, lo.I2])
    if -0.25 < h < 0:
        d0 = np.array(cycle_quadrature(Cycle.DELTA0, h))
        d1 = np.array(cycle_quadrature(Cycle.DELTA_PLUS1, h))
        dm1 = np.array(cycle_quadrature(Cycle.DELTA_MINUS1, h))
        report.residuals["gplus"] = _rel(gp, d0 + d1 + dm1)
        report.residuals["gminus1"] = _rel(gm, -d0 + d1 + dm1)
        report.residuals["lobe_symmetry"] = _rel(d1, dm1)
        try:
            d1u = np.array(continue_cycle(Cycle.DELTA_PLUS1, h, Side.UPPER))
            d1l = np.array(continue_cycle(Cycle.DELTA_PLUS1, h, Side.LOWER))
            report.residuals["d1"] = max(_rel(d1u, d1l), _rel(d1u, d1))
        except PathTooClose:
            pass
    elif h < -0.25:
        d0 = np.array(continue_cycle(Cycle.DELTA0, h, Side.UPPER))
        d1 = np.array(continue_cycle(Cycle.DELTA_PLUS1, h, Side.UPPER))
        dm1 = np.array(continue_cycle(Cycle.DELTA_MINUS1, h, Side.UPPER))
        d1l = np.array(continue_cycle(Cycle.DELTA_PLUS1, h, Side.LOWER))
        report.residuals["gplus"] = _rel(gp, d0 + d1 + dm1)
        report.residuals["gminus2"] = _rel(gm, -d0)
        report.residuals["d1"] = _rel(d1l, d1)
    else:
        raise ValueError("h must lie on the cut and differ from -1/4")
    return report


def verify_d0(h: float) -> float:
    """Residual of ``delta0- = delta0+`` at a real ``h > -1/4`` off the cut."""
    u = np.array(continue_cycle(Cycle.DELTA0, h, Side.UPPER))
    lo = np.array(continue_cycle(Cycle.DELTA0, h, Side.LOWER))
    return _rel(lo, u)


# -- Wronskians -------------------------------------------------------------

class Pairing(Enum):
    """Forms whose boundary values enter the determinant."""

    X2Y_Y = "x2y,y"  # (x^2 y dx, y dx)
    Y_DY = "y,dx/y"  # (y dx, dx/y), dx/y-integral taken as I0'


@dataclass(frozen=True)
class WronskianSample:
    h: float
    W: complex
    pairing: Pairing

    @property
    def shape(self) -> complex:
        """``W`` divided by its predicted h-dependence."""
        if self.pairing is Pairing.X2Y_Y:
            return self.W / (self.h * (4 * self.h + 1))
        return self.W


def wronskian(h: float, pairing: Pairing = Pairing.X2Y_Y) -> WronskianSample:
    """``det [[f+, f-], [g+, g-]]`` of the boundary values of the pair."""
    h = float(h)
    if h == 0 or h == -0.25:
        raise SingularEnergy(f"Wronskian undefined at h = {h}")
    up = boundary_value(h, Side.UPPER)
    lo = up.conj()
    if pairing is Pairing.X2Y_Y:
        w = up.I2 * lo.I0 - lo.I2 * up.I0
    else:
        w = up.I0 * lo.I0_prime - lo.I0 * up.I0_prime
    return WronskianSample(h, complex(w), pairing)


@dataclass(frozen=True)
class WronskianFit:
    pairing: Pairing
    interval: tuple[float, float]
    c: complex
    spread: float
    samples: tuple[WronskianSample, ...]


def fit_wronskian(pairing: Pairing, lo: float, hi: float, n: int = 12) -> WronskianFit:
    """Measure the constant ``W / shape`` on ``[lo, hi]`` and its relative spread."""
    hs = np.linspace(lo, hi, n)
    samples = tuple(wronskian(float(h), pairing) for h in hs)
    shapes = np.array([s.shape for s in samples])
    c = complex(np.mean(shapes))
    spread = float(np.max(np.abs(shapes - c)) / abs(c))
    return WronskianFit(pairing, (lo, hi), c, spread, samples)


def wronskian_jump(pairing: Pairing = Pairing.Y_DY) -> tuple[WronskianFit, WronskianFit, complex]:
    """Fits on ``(-2, -0.26)`` and ``(-0.24, -0.01)`` and their ratio."""
    outer = fit_wronskian(pairing, -2.0, -0.26)
    inner = fit_wronskian(pairing, -0.24, -0.01)
    return outer, inner, inner.c / outer.c
