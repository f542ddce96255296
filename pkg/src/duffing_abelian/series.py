"""Exact local expansions at h = 0.

Near the origin every period of the exterior oval has the form

    I0(h)  = L0(h) ln h + A0(h)
    I2(h)  = L2(h) ln h + A2(h)
    I4'(h) = L4(h) ln h + A4(h)

with power series L, A. The log parts form the period of the cycle that
vanishes at h = 0, so they satisfy the Picard-Fuchs system by themselves;
the analytic parts satisfy it up to forcing by the log parts. All series
are generated here in exact rational arithmetic from the recurrences
implied by

    4h(4h+1) I0'' = -3 I0,   (4h+1) I2' = 5 I2 - I0,   (4h+1) I4' = 4h I0 + 5 I2.

Coefficients are in the unit normalisation ``L0 = -h + ...``; the raw
quadrature values carry an extra overall factor (measured as 2).
"""

from __future__ import annotations

from fractions import Fraction

# candidate closed-form values checked against the exact series
REFERENCE_LOG = {
    "I0": (Fraction(-1), Fraction(3, 8), Fraction(-35, 64)),
    "I2": (Fraction(1, 2), Fraction(-5, 8), Fraction(-315, 256)),
    "I4p": (Fraction(-3, 2), Fraction(35, 8), Fraction(-471, 256)),
}
REFERENCE_CONSTANTS = {"I0": Fraction(4, 3), "I2": Fraction(16, 15), "I4p": Fraction(16, 3)}
REFERENCE_I4P_H2_OFFSET = Fraction(-304, 3)


def log_series_i0(order: int) -> list[Fraction]:
    """Coefficients c[0..order] of L0, normalised by c[1] = -1."""
    c = [Fraction(0), Fraction(-1)]
    for n in range(1, order):
        c.append(-(16 * n * (n - 1) + 3) * c[n] / (4 * n * (n + 1)))
    return c[: order + 1]


def log_series_i2(order: int) -> list[Fraction]:
    """Coefficients of L2 from (4h+1) L2' = 5 L2 - L0, L2(0) = 0."""
    c0 = log_series_i0(order + 1)
    d = [Fraction(0)] * (order + 2)
    # h^n: 4n d_n + (n+1) d_{n+1} = 5 d_n - c_n
    for n in range(order + 1):
        d[n + 1] = (5 * d[n] - c0[n] - 4 * n * d[n]) / (n + 1)
    return d[: order + 1]


def divide_by_4h_plus_1(num: list[Fraction]) -> list[Fraction]:
    out: list[Fraction] = []
    for n, a in enumerate(num):
        out.append(a - (4 * out[n - 1] if n else 0))
    return out


def log_series_i4p(order: int) -> list[Fraction]:
    c0 = log_series_i0(order)
    d = log_series_i2(order)
    num = [5 * d[n] + (4 * c0[n - 1] if n else 0) for n in range(order + 1)]
    return divide_by_4h_plus_1(num)


def analytic_series(a0: Fraction | float, a1: Fraction | float, order: int,
                    log_scale: Fraction | float = 1):
    """Analytic parts (A0, A2) given the free data ``a0, a1``.

    ``log_scale`` multiplies the unit log series (it equals the overall
    normalisation; a0 must then equal ``4/3 * log_scale``).
    """
    c = [log_scale * x for x in log_series_i0(order + 1)]
    d = [log_scale * x for x in log_series_i2(order + 1)]
    a = [a0, a1] + [0] * (order - 1)
    # h^n of 4h(4h+1)A0'' + 4(4h+1)(2L0' - L0/h) + 3A0 = 0
    for n in range(1, order):
        a[n + 1] = -((16 * n * (n - 1) + 3) * a[n] + 16 * (2 * n - 1) * c[n]
                     + 4 * (2 * n + 1) * c[n + 1]) / (4 * n * (n + 1))
    # h^n of (4h+1)(A2' + L2/h) = 5A2 - A0
    b = [0] * (order + 1)
    # I0(0) = I2'(0)/3 forces b1 = 3 a0, hence b0 = 4 a0 / 5
    b[0] = 4 * a[0] / 5
    for n in range(order):
        b[n + 1] = (5 * b[n] - a[n] - 4 * n * b[n] - 4 * d[n] - d[n + 1]) / (n + 1)
    return a[: order + 1], b[: order + 1]


def i4p_h2_coefficient(a: list, b: list) -> object:
    """h**2 coefficient of the analytic part of (4h I0 + 5 I2)/(4h + 1)."""
    num = [5 * b[0], 4 * a[0] + 5 * b[1], 4 * a[1] + 5 * b[2]]
    return divide_by_4h_plus_1(num)[2]


def eval_poly(coeffs, h):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * h + c
    return acc
