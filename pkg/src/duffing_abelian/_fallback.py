"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both implementations follow the same arithmetic step for step, so they
agree to rounding; the test-suite checks this.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

# Dormand-Prince 5(4)
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

OK, MAX_STEPS, UNDERFLOW = 0, 1, 2


def _rhs(kind, z0, z1, rho, th0, th1, t, y0, y1):
    if kind == 0:
        dh = z1 - z0
        h = z0 + t * dh
    else:
        e = cmath.exp(1j * (th0 + t * (th1 - th0)))
        h = z0 + rho * e
        dh = 1j * (th1 - th0) * rho * e
    q = 4.0 * h + 1.0
    d0 = ((12.0 * h + 4.0) * y0 - 5.0 * y1) / (4.0 * h * q)
    d1 = (5.0 * y1 - y0) / q
    return d0 * dh, d1 * dh


def step_piece(kind, z0, z1, rho, th0, th1, y0, y1, rtol, atol, max_steps, dt):
    """Integrate the Picard-Fuchs system along one curve piece, t: 0 -> 1.

    ``kind`` 0 is the segment ``z0 -> z1``; ``kind`` 1 is the arc
    ``z0 + rho * exp(i theta)`` for theta from ``th0`` to ``th1``.
    Returns ``(y0, y1, last_dt, n_steps, status)``.
    """
    t = 0.0
    if dt <= 0.0:
        dt = 0.01
    dt = min(dt, 1.0)
    k1 = _rhs(kind, z0, z1, rho, th0, th1, t, y0, y1)
    n = 0
    last = dt
    while t < 1.0:
        if n >= max_steps:
            return y0, y1, last, n, MAX_STEPS
        if dt < 1e-15 * max(1.0, t):
            return y0, y1, last, n, UNDERFLOW
        final = t + dt >= 1.0
        if final:
            dt = 1.0 - t
        n += 1
        a0 = y0 + dt * A21 * k1[0]
        a1 = y1 + dt * A21 * k1[1]
        k2 = _rhs(kind, z0, z1, rho, th0, th1, t + C2 * dt, a0, a1)
        a0 = y0 + dt * (A31 * k1[0] + A32 * k2[0])
        a1 = y1 + dt * (A31 * k1[1] + A32 * k2[1])
        k3 = _rhs(kind, z0, z1, rho, th0, th1, t + C3 * dt, a0, a1)
        a0 = y0 + dt * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0])
        a1 = y1 + dt * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1])
        k4 = _rhs(kind, z0, z1, rho, th0, th1, t + C4 * dt, a0, a1)
        a0 = y0 + dt * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0])
        a1 = y1 + dt * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1])
        k5 = _rhs(kind, z0, z1, rho, th0, th1, t + C5 * dt, a0, a1)
        a0 = y0 + dt * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0]
                        + A65 * k5[0])
        a1 = y1 + dt * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1]
                        + A65 * k5[1])
        k6 = _rhs(kind, z0, z1, rho, th0, th1, t + dt, a0, a1)
        n0 = y0 + dt * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0]
                        + B6 * k6[0])
        n1 = y1 + dt * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1]
                        + B6 * k6[1])
        k7 = _rhs(kind, z0, z1, rho, th0, th1, t + dt, n0, n1)
        e0 = dt * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0]
                   + E6 * k6[0] + E7 * k7[0])
        e1 = dt * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1]
                   + E6 * k6[1] + E7 * k7[1])
        s0 = atol + rtol * max(abs(y0), abs(n0))
        s1 = atol + rtol * max(abs(y1), abs(n1))
        err = math.sqrt(0.5 * ((abs(e0) / s0) ** 2 + (abs(e1) / s1) ** 2))
        if err <= 1.0:
            t = 1.0 if final else t + dt
            y0, y1 = n0, n1
            k1 = k7
            last = dt
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            dt *= fac
        else:
            dt *= max(0.2, 0.9 * err ** -0.2)
    return y0, y1, last, n, OK


def winding_batch(i0, i2, i4, lam):
    """Argument variation of ``M = l0*I0 + l2*I2 + l4*I4'`` around a closed
    polygon of samples, for every parameter row of ``lam``.

    Returns ``(total, max_step, min_ratio)`` per row: the summed phase
    increments, the largest single increment, and the smallest
    ``|M| / (|l0 I0| + |l2 I2| + |l4 I4'|)`` on the samples.
    """
    i0 = np.asarray(i0, dtype=complex)
    i2 = np.asarray(i2, dtype=complex)
    i4 = np.asarray(i4, dtype=complex)
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    m = lam.shape[0]
    total = np.empty(m)
    max_step = np.empty(m)
    min_ratio = np.empty(m)
    for k in range(m):
        l0, l2, l4 = lam[k]
        vals = l0 * i0 + l2 * i2 + l4 * i4
        scale = abs(l0) * np.abs(i0) + abs(l2) * np.abs(i2) + abs(l4) * np.abs(i4)
        prod = vals * np.conj(np.roll(vals, 1))
        steps = np.arctan2(prod.imag, prod.real)
        total[k] = float(np.cumsum(steps)[-1])
        max_step[k] = float(np.max(np.abs(steps)))
        min_ratio[k] = float(np.min(np.abs(vals) / scale))
    return total, max_step, min_ratio
