from __future__ import annotations

import math

import numpy as np
import pytest

from duffing_abelian import monodromy as mono
from duffing_abelian import picard_fuchs as pf
from duffing_abelian.errors import ExtrapolationFailure, PathTooClose, SingularEnergy
from duffing_abelian.level_curve import Cycle, CycleSpec, Side, integrate_cycle


def test_richardson_removes_polynomial_error():
    d = 0.1 * 2.0 ** -np.arange(5)
    vals = 3.0 + 2 * d - 5 * d ** 2 + d ** 3
    est, err = mono.richardson(vals[:, None])
    assert abs(est[0] - 3.0) < 1e-13
    assert err < 1e-12


@pytest.mark.parametrize("h", [-0.05, -0.125, -0.2, -0.5, -1.0, -3.0])
def test_cycle_relations(h):
    rep = mono.verify_cycle_relations(h)
    assert rep.passed(1e-8), rep.residuals


def test_upper_boundary_value_decomposes():
    h = -0.15
    up = mono.boundary_value(h)
    d0 = integrate_cycle(CycleSpec(Cycle.DELTA0), 0, h)
    d1 = integrate_cycle(CycleSpec(Cycle.DELTA_PLUS1), 0, h)
    assert up.I0 == pytest.approx(d0 + 2 * d1, rel=1e-9)
    assert d0.imag > 0


def test_lower_is_conjugate_of_upper():
    for h in (-0.05, -0.6):
        up = mono.boundary_value(h, Side.UPPER)
        lo = mono.boundary_value(h, Side.LOWER)
        assert lo.I0 == up.I0.conjugate() and lo.I2 == up.I2.conjugate()


def test_boundary_value_approached_from_above():
    h = -0.7
    b = mono.boundary_value(h)
    near = pf.evaluate(complex(h, 1e-7))
    assert abs(near.I0 - b.I0) < 1e-5 * abs(b.I0)


def test_errors():
    with pytest.raises(PathTooClose):
        mono.boundary_value(0.3)
    with pytest.raises(SingularEnergy):
        mono.boundary_value(-0.25)
    with pytest.raises(ExtrapolationFailure):
        mono.boundary_value(-0.7, levels=2, tol=1e-15)


def test_saddle_limit():
    i0, i2 = mono.saddle_value()
    assert i0 / i2 == pytest.approx(5, abs=1e-9)
    assert i0 == pytest.approx(4 * math.sqrt(2) / 3 * 1j, rel=1e-9)
    lo = mono.saddle_value(Side.LOWER)
    assert lo[0] == i0.conjugate()


@pytest.mark.parametrize("s", [1e-10, 1e-12])
def test_ratio_converges_at_saddle(s):
    for h in (-0.25 - s, -0.25 + s):
        b = mono.boundary_value(h)
        assert abs(b.I0 / b.I2 - 5) < 1e-6


def test_wronskian_constants():
    outer, inner, ratio = mono.wronskian_jump(mono.Pairing.Y_DY)
    assert outer.spread < 1e-8 and inner.spread < 1e-8
    assert ratio == pytest.approx(2.0, abs=1e-8)
    assert outer.c == pytest.approx(16 * math.pi / 3 * 1j, rel=1e-8)
    o2, i2, r2 = mono.wronskian_jump(mono.Pairing.X2Y_Y)
    assert o2.c == pytest.approx(64 * math.pi / 15 * 1j, rel=1e-8)
    assert r2 == pytest.approx(2.0, abs=1e-8)


def test_wronskian_undefined_at_critical_values():
    with pytest.raises(SingularEnergy):
        mono.wronskian(-0.25)


def test_d0_has_no_monodromy_right_of_quarter():
    assert mono.verify_d0(0.5) < 1e-8
