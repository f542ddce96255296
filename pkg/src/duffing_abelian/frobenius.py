"""Local Frobenius bases of the Picard-Fuchs system at h = 0 and h = -1/4.

Written as ``4h(4h+1) X' = N(h) X`` with ``N = [[12h+4, -5], [-4h, 20h]]``,
the system has a simple pole at each critical value, local exponents
{0, 1}, and a logarithmic resonance. With ``s = h - h0`` and
``4h(4h+1) = q1 s + q2 s**2``, ``N = N0 + N1 s`` every solution is

    X(s) = c_log (Y(s) ln s + Z(s)) + c_hol Y(s),

where ``Y`` is the holomorphic solution with ``Y(0) = 0`` (the period of
the vanishing cycle) and ``Z`` is fixed by a gauge choice. Both series
converge for ``|s| < 1/4``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

N_TERMS = 90


def _null(m: np.ndarray, left: bool = False) -> np.ndarray:
    u, s, vt = np.linalg.svd(m.T if left else m)
    v = vt[-1]
    return v / v[np.argmax(np.abs(v))]


@dataclass(frozen=True)
class LocalBasis:
    center: float
    hol: np.ndarray  # (N_TERMS, 2) coefficients of Y
    reg: np.ndarray  # (N_TERMS, 2) coefficients of Z

    def terms(self, s: complex, log_s: complex) -> tuple[np.ndarray, np.ndarray]:
        powers = s ** np.arange(N_TERMS)
        y = powers @ self.hol
        z = powers @ self.reg
        return y * log_s + z, y


def build_basis(center: float, n_terms: int = N_TERMS) -> LocalBasis:
    h0 = center
    q1 = 4.0 * h0 * 4.0 + 4.0 * (4.0 * h0 + 1.0)  # d/dh [4h(4h+1)] at h0
    q2 = 16.0
    n0 = np.array([[12.0 * h0 + 4.0, -5.0], [-4.0 * h0, 20.0 * h0]])
    n1 = np.array([[12.0, 0.0], [-4.0, 20.0]])
    eye = np.eye(2)

    hol = np.zeros((n_terms, 2))
    hol[1] = _null(q1 * eye - n0)
    for n in range(2, n_terms):
        hol[n] = np.linalg.solve(q1 * n * eye - n0, (n1 - q2 * (n - 1) * eye) @ hol[n - 1])

    # log solution: scale of Y is fixed by solvability at order 1
    z0 = _null(n0)
    w = _null(q1 * eye - n0, left=True)
    mu = (w @ (n1 @ z0)) / (q1 * (w @ hol[1]))
    y = mu * hol
    reg = np.zeros((n_terms, 2))
    reg[0] = z0
    rhs = n1 @ z0 - q1 * y[1]
    sol, *_ = np.linalg.lstsq(q1 * eye - n0, rhs, rcond=None)
    # gauge: no component along the holomorphic direction
    k = hol[1] / np.linalg.norm(hol[1])
    reg[1] = sol - (sol @ k) * k
    for n in range(2, n_terms):
        rhs = (n1 - q2 * (n - 1) * eye) @ reg[n - 1] - q1 * y[n] - q2 * y[n - 1]
        reg[n] = np.linalg.solve(q1 * n * eye - n0, rhs)
    return LocalBasis(center, y, reg)


@dataclass(frozen=True)
class LocalExpansion:
    """A solution near a critical value, as coefficients on a local basis.

    Only the closed upper half-disc is served (principal ``ln s``, with
    ``arg s = pi`` on the negative side); callers reflect for ``Im h < 0``.
    """

    basis: LocalBasis
    c_log: complex
    c_hol: complex

    def __call__(self, h: complex) -> tuple[complex, complex]:
        s = complex(h) - self.basis.center
        if s == 0:
            return self.at_center()
        s = complex(s.real, abs(s.imag))
        lg, hl = self.basis.terms(s, cmath.log(s))
        x = self.c_log * lg + self.c_hol * hl
        return complex(x[0]), complex(x[1])

    def at_center(self) -> tuple[complex, complex]:
        """Limit at the critical value, where Y and Y ln s vanish."""
        z = self.c_log * self.basis.reg[0]
        return complex(z[0]), complex(z[1])

    @classmethod
    def match(cls, basis: LocalBasis, h: complex,
              value: tuple[complex, complex]) -> "LocalExpansion":
        s = complex(h) - basis.center
        lg, hl = basis.terms(s, cmath.log(s))
        coef = np.linalg.solve(np.column_stack([lg, hl]), np.asarray(value, dtype=complex))
        return cls(basis, complex(coef[0]), complex(coef[1]))
