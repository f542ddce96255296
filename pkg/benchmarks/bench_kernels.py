"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from duffing_abelian import _fallback

try:
    from duffing_abelian import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases():
    y = (10.0 + 0j, 8.0 + 0j)
    piece = (1, 0j, 0j, 3.0, 0.0, 3.0, *y, 1e-10, 1e-12, 1_000_000, 0.0)
    rng = np.random.default_rng(0)
    n = 4500
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    i0 = np.exp(1j * t) * (2 + rng.random(n))
    i2 = np.exp(2j * t)
    i4 = np.exp(-1j * t) + 0.5
    lam = rng.standard_normal((200, 3))
    return {"step_piece (arc, r=3)": ("step_piece", piece),
            "winding_batch (4500 nodes x 200 params)": ("winding_batch", (i0, i2, i4, lam))}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = {"python": _fallback}
    if _kernels is not None:
        impls["cython"] = _kernels
    print(f"{'kernel':<42} {'backend':<8} {'best [ms]':>12} {'speed-up':>9}")
    for name, (fn, call_args) in cases().items():
        best = {}
        for label, mod in impls.items():
            f = getattr(mod, fn)
            number = 1 if label == "python" else 10
            times = timeit.repeat(lambda: f(*call_args), number=number, repeat=args.repeat)
            best[label] = min(times) / number * 1e3
        for label, ms in best.items():
            speed = best["python"] / ms
            print(f"{name:<42} {label:<8} {ms:>12.3f} {speed:>8.1f}x")


if __name__ == "__main__":
    main()
