"""Direct quadrature of the Abelian integrals over real cycles.

On the level set ``H = h`` with ``H = y**2/2 - x**2/2 + x**4/4`` we have
``y**2 = Q(x) = 2h + x**2 - x**4/2 = (r_plus - x**2)(x**2 - r_minus)/2``
where ``r_plus, r_minus = 1 +- sqrt(1 + 4h)``. Every integrand is written
in this factored form so endpoint behaviour is exact.

Values are raw geometric ones: the full exterior oval at ``h -> 0+`` has
area 8/3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import tanhsinh
from .errors import CycleUnavailable, NoRealOval

DEFAULT_RTOL = 1e-10


class Cycle(enum.Enum):
    GAMMA = "gamma"
    DELTA0 = "delta0"
    DELTA_PLUS1 = "delta+1"
    DELTA_MINUS1 = "delta-1"


class Side(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    NOT_ON_CUT = "none"


@dataclass(frozen=True)
class CycleSpec:
    cycle: Cycle
    side: Side = Side.NOT_ON_CUT


@dataclass(frozen=True)
class Quartic:
    """The quartic ``Q(x) = 2h + x**2 - x**4/2`` at a real energy ``h``."""

    h: float

    @property
    def disc(self) -> float:
        return math.sqrt(1.0 + 4.0 * self.h)

    @property
    def r_plus(self) -> float:
        return 1.0 + self.disc

    @property
    def r_minus(self) -> float:
        # 1 - sqrt(1 + 4h) without cancellation near h = 0
        return -4.0 * self.h / (1.0 + self.disc)

    def __call__(self, x):
        return 2.0 * self.h + x * x - 0.5 * x ** 4


def oval_roots(h: float) -> list[float]:
    """Nonnegative real roots of Q, ascending; the double root at 0 (h = 0)
    and at 1 (h = -1/4) is listed once per multiplicity."""
    if h < -0.25:
        raise NoRealOval(f"no real level curve for h = {h} < -1/4")
    q = Quartic(h)
    if h > 0:
        return [math.sqrt(q.r_plus)]
    if h == 0:
        return [0.0, 0.0, math.sqrt(2.0)]
    if h == -0.25:
        return [1.0, 1.0]
    return [math.sqrt(q.r_minus), math.sqrt(q.r_plus)]


def _check(spec: CycleSpec, h: float) -> None:
    if h < -0.25:
        raise NoRealOval(f"no real level curve for h = {h} < -1/4")
    if spec.cycle is Cycle.GAMMA:
        if h < 0 or spec.side is not Side.NOT_ON_CUT:
            raise CycleUnavailable(
                "the exterior oval is real only for h >= 0; boundary values on "
                "the cut come from continuation")
    elif h > 0:
        raise CycleUnavailable(f"{spec.cycle.value} is real only for -1/4 <= h <= 0")


def _outer_oval(q: Quartic, i: int, derivative: bool, rtol: float) -> float:
    # 4 * int_0^a: the oval is symmetric under x -> -x and y -> -y
    a = math.sqrt(q.r_plus)
    c2 = -q.r_minus

    def f(x, _da, db):
        sq = np.sqrt(0.5 * db * (a + x) * (x * x + c2))
        return x ** i / sq if derivative else x ** i * sq

    if derivative and i == 0 and q.h == 0:
        raise CycleUnavailable("d/dh of the oval area diverges at h = 0")
    return 4.0 * tanhsinh.integrate(f, 0.0, a, rtol)


def _lobe(q: Quartic, i: int, derivative: bool, rtol: float, sign: int) -> float:
    x1 = math.sqrt(q.r_minus)
    x2 = math.sqrt(q.r_plus)
    if x2 - x1 == 0.0:
        return 0.0

    # oriented so the lobe area is positive; the left lobe is integrated on
    # its own interval rather than reflected
    def f(x, da, db):
        ax = np.abs(x)
        if sign > 0:
            q_val = 0.5 * db * (x2 + ax) * da * (ax + x1)
        else:
            q_val = 0.5 * da * (x2 + ax) * db * (ax + x1)
        sq = np.sqrt(q_val)
        return x ** i / sq if derivative else x ** i * sq

    if sign > 0:
        return 2.0 * tanhsinh.integrate(f, x1, x2, rtol)
    return 2.0 * tanhsinh.integrate(f, -x2, -x1, rtol)


def _segment(q: Quartic, i: int, derivative: bool, rtol: float) -> complex:
    # y = +i sqrt(-Q) on [-x1, x1]; the sign is fixed so that the relation
    # gamma(upper) - gamma(lower) = 2 delta0 holds with these values
    x1 = math.sqrt(q.r_minus)
    x2 = math.sqrt(q.r_plus)
    if x1 == 0.0:
        if derivative:
            raise CycleUnavailable("d/dh of the delta0 period diverges at h = 0")
        return 0j

    def f(x, da, db):
        sq = np.sqrt(0.5 * (x2 * x2 - x * x) * da * db)
        return x ** i / sq if derivative else x ** i * sq

    val = 2.0 * tanhsinh.integrate(f, -x1, x1, rtol)
    # dy/dh = 1/y = -i/sqrt(-Q)
    return -1j * val if derivative else 1j * val


def integrate_cycle(spec: CycleSpec, i: int, h: float,
                    rtol: float = DEFAULT_RTOL) -> complex:
    """``oint x**i y dx`` over a real cycle at real energy ``h``.

    ``Gamma`` accepts ``h >= 0`` (``h = 0`` gives the limit from above);
    the delta cycles accept ``-1/4 <= h <= 0``.
    """
    _check(spec, h)
    return _dispatch(spec, i, h, False, rtol)


def integrate_cycle_derivative(spec: CycleSpec, i: int, h: float,
                               rtol: float = DEFAULT_RTOL) -> complex:
    """``d/dh oint x**i y dx = oint x**i dx / y`` over a real cycle."""
    _check(spec, h)
    return _dispatch(spec, i, h, True, rtol)


def _dispatch(spec: CycleSpec, i: int, h: float, derivative: bool,
              rtol: float) -> complex:
    q = Quartic(float(h))
    if spec.cycle is Cycle.GAMMA:
        return complex(_outer_oval(q, i, derivative, rtol))
    if spec.cycle is Cycle.DELTA_PLUS1:
        return complex(_lobe(q, i, derivative, rtol, +1))
    if spec.cycle is Cycle.DELTA_MINUS1:
        return complex(_lobe(q, i, derivative, rtol, -1))
    return complex(_segment(q, i, derivative, rtol))
