"""Kernel selection: the compiled extension when it is importable, the
pure-Python module otherwise. Set ``DUFFING_ABELIAN_PURE_PYTHON=1`` to force
the fallback."""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("DUFFING_ABELIAN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

step_piece = _impl.step_piece
winding_batch = _impl.winding_batch

OK, MAX_STEPS, UNDERFLOW = _fallback.OK, _fallback.MAX_STEPS, _fallback.UNDERFLOW
