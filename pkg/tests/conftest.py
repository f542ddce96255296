from __future__ import annotations

import mpmath as mp
import pytest


def oracle_gamma(i: int, h: float, derivative: bool = False, dps: int = 30) -> float:
    """Independent oracle: ``4 int_0^x+ x^i y dx`` (``x^i / y`` for the
    derivative) at arbitrary precision, via the substitution ``x = x+ sin t``."""
    with mp.workdps(dps):
        h = mp.mpf(h)
        xp = mp.sqrt(1 + mp.sqrt(1 + 4 * h))
        xm2 = 1 - mp.sqrt(1 + 4 * h)  # -x-^2 <= 0

        def f(t):
            x = xp * mp.sin(t)
            # Q = (x+^2 - x^2)(x^2 - x-^2) / 2 with x-^2 = xm2
            w = mp.sqrt((x * x - xm2) / 2)
            c = xp * mp.cos(t)
            if derivative:
                return x ** i / w
            return x ** i * w * c * c

        return float(4 * mp.quad(f, [0, mp.pi / 2]))


@pytest.fixture(scope="session")
def oracle():
    return oracle_gamma


def oracle_complex(i: int, h: complex, dps: int = 25) -> complex:
    """``4 int_0^x+(h) x^i y dx`` along the straight segment, for complex h
    off the cut; the principal square roots are continuous there."""
    with mp.workdps(dps):
        h = mp.mpc(h)
        xp = mp.sqrt(1 + mp.sqrt(1 + 4 * h))
        xm2 = 1 - mp.sqrt(1 + 4 * h)

        def f(t):
            x = xp * mp.sin(t)
            return x ** i * mp.sqrt((x * x - xm2) / 2) * (xp * mp.cos(t)) ** 2

        return complex(4 * mp.quad(f, [0, mp.pi / 2]))


@pytest.fixture(scope="session")
def oracle_c():
    return oracle_complex
