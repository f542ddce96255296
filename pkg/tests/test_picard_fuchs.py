from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duffing_abelian import picard_fuchs as pf
from duffing_abelian.errors import FitFailure, PathTooClose
from duffing_abelian.level_curve import Cycle, CycleSpec, integrate_cycle


@pytest.mark.parametrize("h", [1 + 0.5j, 0.3 + 2j, 5 - 3j, 0.05 + 0.3j, -0.1 + 0.5j,
                               -1 + 0.3j, -0.125 + 0.05j, -0.3 - 0.02j, 0.01 + 0.01j])
def test_continuation_matches_complex_quadrature(oracle_c, h):
    v = pf.evaluate(h)
    for got, i in ((v.I0, 0), (v.I2, 2)):
        want = oracle_c(i, h)
        assert abs(got - want) < 1e-9 * abs(want)


@pytest.mark.parametrize("h", [0.05, 0.5, 4.0, 1e3, 1e6])
def test_continuation_matches_real_quadrature(h):
    v = pf.evaluate(h)
    q = pf.quadrature_vector(h)
    assert abs(v.I0 - q.I0) < 1e-9 * abs(q.I0)
    assert abs(v.I2 - q.I2) < 1e-9 * abs(q.I2)


def test_i4prime_against_quadrature():
    g = CycleSpec(Cycle.GAMMA)
    from duffing_abelian.level_curve import integrate_cycle_derivative
    for h in (0.2, 3.0):
        v = pf.quadrature_vector(h)
        assert v.i4prime.real == pytest.approx(integrate_cycle_derivative(g, 4, h).real,
                                               rel=1e-10)


def test_pf_matrix_derivative():
    g = CycleSpec(Cycle.GAMMA)
    from duffing_abelian.level_curve import integrate_cycle_derivative
    v = pf.quadrature_vector(0.7)
    d0, d2 = v.derivative()
    assert d0.real == pytest.approx(integrate_cycle_derivative(g, 0, 0.7).real, rel=1e-11)
    assert d2.real == pytest.approx(integrate_cycle_derivative(g, 2, 0.7).real, rel=1e-11)


def test_cut_and_critical_values_rejected():
    for h in (0, -0.1, -0.25, -3):
        with pytest.raises(PathTooClose):
            pf.evaluate(complex(h))


def test_local_series_agrees_with_ode_on_disc_edge():
    for center in (0.0, -0.25):
        exp = pf.local_expansion(center)
        for arg in (0.3, 1.5, 2.8):
            h = center + 0.12 * cmath.exp(1j * arg)
            ode = pf.continue_along_path(pf.plan_path(h), pf.seed())
            i0, i2 = exp(h)
            assert abs(i0 - ode.I0) < 1e-9 * abs(ode.I0)
            assert abs(i2 - ode.I2) < 1e-9 * abs(ode.I2)


def test_paths_keep_clearance():
    for h in (-5 + 0.1j, -0.2 + 1e-3j, 0.001 + 0.001j, 100j, -0.24 - 0.5j):
        path = pf.plan_path(h)
        path.validate()
        assert path.waypoints[-1] == h


@settings(max_examples=25, deadline=None)
@given(st.floats(-20, 20), st.floats(0.01, 20))
def test_conjugation_symmetry(x, y):
    up = pf.evaluate(complex(x, y))
    lo = pf.evaluate(complex(x, -y))
    assert lo.I0 == up.I0.conjugate()
    assert lo.I2 == up.I2.conjugate()


def test_memo_returns_identical_object():
    a = pf.evaluate(2 + 1j)
    assert pf.evaluate(2 + 1j) is a


def test_asymptotic_fit():
    samples = [(float(h), pf.quadrature_vector(float(h))) for h in np.geomspace(1e-3, 0.1, 16)]
    model = pf.fit_asymptotic_constants(samples)
    assert model.scale == pytest.approx(2.0, rel=1e-8)
    assert model.analytic["I0"][0] == pytest.approx(8 / 3, rel=1e-8)
    assert model.i4p_h2_verdict()["holds"] == "-16"
    with pytest.raises(FitFailure):
        pf.fit_asymptotic_constants(samples[:4])


def test_asymptotic_model_extrapolates():
    samples = [(float(h), pf.quadrature_vector(float(h))) for h in np.geomspace(1e-3, 0.1, 16)]
    model = pf.fit_asymptotic_constants(samples)
    h = 2e-3 + 1e-3j
    v = pf.evaluate(h)
    i0, i2, _ = model.evaluate(h)
    assert abs(i0 - v.I0) < 1e-6 * abs(v.I0)
    assert abs(i2 - v.I2) < 1e-6 * abs(v.I2)
    assert integrate_cycle(CycleSpec(Cycle.GAMMA), 0, 0.0).real == pytest.approx(8 / 3)
