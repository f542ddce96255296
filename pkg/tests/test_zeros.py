from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duffing_abelian import picard_fuchs as pf
from duffing_abelian import zeros as z
from duffing_abelian.errors import DomainError
from duffing_abelian.zeros import KeyholeContour, MelnikovParams, Status

finite = st.floats(-1, 1, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


def test_params_validation_and_normalization():
    with pytest.raises(DomainError):
        MelnikovParams(0, 0, 0)
    p = MelnikovParams(-3, 4, 0).normalized()
    assert p.vector == pytest.approx([0.6, -0.8, 0.0])
    assert p.normalized() == p


@settings(max_examples=40, deadline=None)
@given(finite, finite, finite)
def test_normalization_idempotent(a, b, c):
    p = MelnikovParams(a, b, c).normalized()
    assert np.linalg.norm(p.vector) == pytest.approx(1.0)
    q = p.normalized()
    assert q.vector == pytest.approx(p.vector, abs=1e-15)


def test_contour_validation():
    with pytest.raises(DomainError):
        KeyholeContour(R=1.0)
    with pytest.raises(DomainError):
        KeyholeContour(delta=0.2)
    c = KeyholeContour()
    assert c.halved().delta == c.delta / 2 and c.doubled().R == 2 * c.R


def test_i0_has_no_zeros():
    zc = z.count_zeros([1, 0, 0])
    assert zc.count == 0 and zc.status is Status.STABLE


@pytest.mark.parametrize("lam", [(1, -5, 0), (4, -5, 0)])
def test_points_on_loci_are_near_boundary(lam):
    assert z.count_zeros(lam).status is Status.NEAR_BOUNDARY


def test_rp1_counts_on_each_arc():
    # with l0 = 1 the loci sit at l2 = 0, -5/4 and -5
    assert z.count_zeros([1, 1, 0]).count == 0
    assert z.count_zeros([1, -0.5, 0]).count == 1
    assert z.count_zeros([1, -2, 0]).count == 2
    assert z.count_zeros([1, -10, 0]).count == 0


def test_real_zero_found_by_sign_change():
    lam = (10.0, -1.0, -1.0)
    assert z.count_zeros(lam).count == 1
    m1 = z.eval_M(lam, 240.0).real
    m2 = z.eval_M(lam, 260.0).real
    assert m1 * m2 < 0


@settings(max_examples=20, deadline=None)
@given(finite, finite, finite, st.floats(0.1, 50))
def test_scale_and_sign_invariance(a, b, c, k):
    base = z.count_zeros([a, b, c])
    for s in (k, -k):
        other = z.count_zeros([s * a, s * b, s * c])
        assert other.count == base.count
        assert other.status == base.status


def test_eval_f_two_formulas_agree():
    for h in (2 + 1j, -0.3 + 0.4j, 50 - 20j):
        z.eval_F((0.3, -0.5, 0.8), h)
    assert z.eval_F((1, 0, 0), 1 + 1j) == pytest.approx(1.0)


def test_alpha_root():
    assert z.alpha_root((1, 1, 1)) == pytest.approx(-1.5)
    assert z.alpha_root((1, 0, 1)) is None


def test_petrov_bound():
    assert z.petrov_bound((1, 0, 0)) == 0
    assert z.petrov_bound((1, 1, 1)) == 4
    for lam in ((1, -0.5, 0), (1, -2, 0), (1, -10, 0), (1, 2, 0)):
        assert 2 >= z.petrov_bound(lam) >= z.count_zeros(lam).count


def test_batch_equals_single():
    pts = [(1, -0.5, 0), (0.2, 0.3, -0.9), (1, 1, 1)]
    batch = z.count_zeros_batch(pts)
    for p, b in zip(pts, batch):
        assert z.count_zeros(p) == b


def test_defect_tolerance_passthrough():
    c = KeyholeContour(defect_tol=1e-30)
    assert z.count_zeros((1, 0, 0), c).status is Status.NEAR_BOUNDARY
    assert z.count_zeros((1, 0, 0)).status is Status.STABLE


def test_count_bounded_on_random_points():
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((200, 3))
    for p, zc in zip(pts, z.count_zeros_batch(pts)):
        assert 0 <= zc.count <= 3
        if zc.status is Status.STABLE:
            assert zc.winding_defect < 1e-3


def test_circle_variation_of_i0_ratio_is_zero():
    assert abs(z.circle_variation((1, 0, 0), 50.0)) < 1e-12
    assert pf.evaluate(50j).I0 != 0
    assert math.isfinite(z.circle_variation((0.1, 0.7, -0.2), 50.0))
