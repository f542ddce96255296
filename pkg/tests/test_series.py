from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest

from duffing_abelian import series
from duffing_abelian.frobenius import build_basis


def test_l0_head():
    assert series.log_series_i0(4) == [0, -1, F(3, 8), F(-35, 64), F(1155, 1024)]


def test_l2_and_l4_heads():
    assert series.log_series_i2(5) == [0, 0, F(1, 2), F(-5, 8), F(315, 256), F(-3003, 1024)]
    assert series.log_series_i4p(5) == [0, 0, F(-3, 2), F(35, 8), F(-3465, 256),
                                        F(45045, 1024)]


def test_l0_solves_second_order_equation():
    c = series.log_series_i0(30)
    # h^n of 4h(4h+1)L'' + 3L
    for n in range(1, 29):
        lhs = 16 * n * (n - 1) * c[n] + 4 * (n + 1) * n * c[n + 1] + 3 * c[n]
        assert lhs == 0


def test_l4_relation():
    c, d, e = (series.log_series_i0(12), series.log_series_i2(12), series.log_series_i4p(12))
    # (4h+1) e = 4h c + 5 d
    for n in range(12):
        assert e[n] + (4 * e[n - 1] if n else 0) == 5 * d[n] + (4 * c[n - 1] if n else 0)


def test_analytic_series_against_quadrature():
    from duffing_abelian import picard_fuchs as pf
    samples = [(float(h), pf.quadrature_vector(float(h))) for h in np.geomspace(1e-3, 0.1, 16)]
    model = pf.fit_asymptotic_constants(samples)
    a, b = series.analytic_series(F(4, 3), model.a1, 6)
    assert float(a[2]) == pytest.approx(model.a2, rel=1e-5)
    assert float(b[2]) == pytest.approx(model.b2, rel=1e-5)
    # fitted I4' h^2 coefficient equals 4 a1 + 5 b2 - 16
    assert float(series.i4p_h2_coefficient(a, b)) == pytest.approx(4 * model.a1 + 5 * model.b2 - 16,
                                                                   rel=1e-6)


def test_eval_poly():
    assert series.eval_poly([1, 2, 3], 2.0) == 17.0


@pytest.mark.parametrize("center", [0.0, -0.25])
def test_local_basis_solves_system(center):
    from duffing_abelian import picard_fuchs as pf
    basis = build_basis(center)
    s = 0.05 + 0.02j
    import cmath
    eps = 1e-6
    lg = lambda z: basis.terms(z, cmath.log(z))  # noqa: E731
    y, hol = lg(s)
    for vec, k in ((y, 0), (hol, 1)):
        dp = (lg(s + eps)[k] - lg(s - eps)[k]) / (2 * eps)
        rhs = pf.pf_matrix(center + s) @ vec
        assert np.max(np.abs(dp - rhs)) < 1e-6 * np.max(np.abs(rhs))
