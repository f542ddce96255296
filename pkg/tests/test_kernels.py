from __future__ import annotations

import cmath
import importlib

import numpy as np
import pytest

from duffing_abelian import _fallback, kernels

compiled = pytest.importorskip("duffing_abelian._kernels")

PIECES = [
    (0, 1.0 + 0j, 3.0 + 2j, 0.0, 0.0, 0.0),
    (0, 0.5 + 0.5j, -0.4 + 0.5j, 0.0, 0.0, 0.0),
    (1, 0j, 0j, 2.0, 0.3, 2.9),
    (1, 0j, 0j, 1e4, 0.0, 3.1),
]


@pytest.mark.parametrize("piece", PIECES)
def test_step_piece_backends_agree(piece):
    y = (2.1 + 0.3j, 1.7 - 0.2j)
    a = compiled.step_piece(*piece, *y, 1e-10, 1e-12, 100000, 0.0)
    b = _fallback.step_piece(*piece, *y, 1e-10, 1e-12, 100000, 0.0)
    assert a[3] == b[3] and a[4] == b[4] == kernels.OK
    assert abs(a[0] - b[0]) <= 1e-12 * abs(b[0])
    assert abs(a[1] - b[1]) <= 1e-12 * abs(b[1])


def test_step_piece_status_codes():
    y = (1 + 0j, 1 + 0j)
    out = _fallback.step_piece(0, 1 + 0j, 100 + 0j, 0, 0, 0, *y, 1e-13, 1e-15, 3, 0.0)
    assert out[4] == kernels.MAX_STEPS
    out = compiled.step_piece(0, 1 + 0j, 100 + 0j, 0, 0, 0, *y, 1e-13, 1e-15, 3, 0.0)
    assert out[4] == kernels.MAX_STEPS


def test_winding_batch_backends_agree():
    rng = np.random.default_rng(7)
    t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    i0 = np.exp(1j * t) + 0.1 * rng.standard_normal(400)
    i2 = np.exp(2j * t) + 0.3
    i4 = 1.0 + 0.2 * np.exp(-1j * t)
    lam = rng.standard_normal((25, 3))
    a = compiled.winding_batch(i0, i2, i4, lam)
    b = _fallback.winding_batch(i0, i2, i4, lam)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


def test_winding_counts_a_simple_loop():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    z = np.exp(1j * t)
    total, step, ratio = _fallback.winding_batch(z ** 3, z, z, np.array([[1.0, 0.0, 0.0]]))
    assert total[0] == pytest.approx(6 * np.pi)
    assert ratio[0] == pytest.approx(1.0)


def test_pure_python_switch(monkeypatch):
    monkeypatch.setenv("DUFFING_ABELIAN_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.step_piece is _fallback.step_piece
    finally:
        monkeypatch.delenv("DUFFING_ABELIAN_PURE_PYTHON")
        importlib.reload(kernels)
    assert kernels.BACKEND == "cython"


def test_exact_solution_on_an_arc():
    # the log period solves the system; compare the kernel with cmath
    from duffing_abelian import series
    c0 = [float(c) for c in series.log_series_i0(60)]
    c2 = [float(c) for c in series.log_series_i2(60)]
    ev = lambda c, h: sum(a * h ** n for n, a in enumerate(c))  # noqa: E731
    z0 = 0.05 * cmath.exp(0.2j)
    z1 = 0.05 * cmath.exp(2.5j)
    out = compiled.step_piece(1, 0j, 0j, 0.05, 0.2, 2.5, ev(c0, z0), ev(c2, z0),
                              1e-12, 1e-14, 100000, 0.0)
    assert abs(out[0] - ev(c0, z1)) < 1e-10 * abs(ev(c0, z1))
    assert abs(out[1] - ev(c2, z1)) < 1e-10 * abs(ev(c2, z1))
