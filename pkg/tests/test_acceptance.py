"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (``pytest -v tests/test_acceptance.py``) or directly
(``python3 tests/test_acceptance.py``). Tolerances are fixed here and are
not configurable.
"""

from __future__ import annotations

import functools
import math
import sys
import time

import numpy as np
import pytest

from duffing_abelian import atlas, render, verify
from duffing_abelian import monodromy as mono
from duffing_abelian import picard_fuchs as pf
from duffing_abelian.atlas import LocusKind
from duffing_abelian.config import RunConfig
from duffing_abelian.level_curve import Cycle, CycleSpec, integrate_cycle, integrate_cycle_derivative
from duffing_abelian.zeros import MelnikovParams, Status, count_zeros, count_zeros_batch, petrov_bound

TOL_PF_FD = 1e-6
TOL_PF_ODE = 1e-8
RUNTIME_PF = 10.0
TOL_I4 = 1e-6
TOL_SADDLE = 1e-6
TOL_W_SPREAD = 1e-5
TOL_W_JUMP = 1e-6
TOL_CYCLES = 1e-5
N_RANDOM = 500
RUNTIME_ZEROS = 300.0
RP1_RES = 720
RP2_RES = 64
TOL_ASYMPTOTIC = 1e-4

Line = tuple[str, bool, str]


# -- criteria ---------------------------------------------------------------

def criterion_1() -> list[Line]:
    t0 = time.perf_counter()
    rep = verify.verify_pf()
    elapsed = time.perf_counter() - t0
    fd = [r.value for r in rep.rows if ":" in r.name and r.name.split()[1].startswith("fd")]
    ode = [r.value for r in rep.rows if ":" in r.name and r.name.split()[1].startswith("ode")]
    return [
        ("Picard-Fuchs residuals, finite differences", max(fd) < TOL_PF_FD,
         f"max {max(fd):.3e} < {TOL_PF_FD:g} over {len(fd)} checks"),
        ("Picard-Fuchs residuals, ODE-system derivatives", max(ode) < TOL_PF_ODE,
         f"max {max(ode):.3e} < {TOL_PF_ODE:g} over {len(ode)} checks"),
        ("Picard-Fuchs runtime", elapsed < RUNTIME_PF, f"{elapsed:.2f} s < {RUNTIME_PF:g} s"),
    ]


def criterion_2() -> list[Line]:
    g = CycleSpec(Cycle.GAMMA)
    worst = 0.0
    for h in np.geomspace(0.01, 100.0, 10):
        h = float(h)
        i0 = integrate_cycle(g, 0, h).real
        i2 = integrate_cycle(g, 2, h).real
        d4 = integrate_cycle_derivative(g, 4, h).real
        worst = max(worst, abs((4 * h + 1) * d4 - (4 * h * i0 + 5 * i2)) / abs(4 * h * i0 + 5 * i2))
    return [("(4h+1) I4' = 4h I0 + 5 I2 vs quadrature of d/dh x^4 y dx", worst < TOL_I4,
             f"max rel {worst:.3e} < {TOL_I4:g} at 10 points in [0.01, 100]")]


def criterion_3() -> list[Line]:
    rep = verify.saddle_ratio_report()
    worst = max(r.value for r in rep.rows if r.name.startswith("I0/I2"))
    i0, i2 = mono.saddle_value()
    lim = abs(i0 / i2 - 5)
    closed = abs(i0 - 4 * math.sqrt(2) / 3 * 1j) / abs(i0)
    return [
        ("I0/I2 -> 5 at h = -1/4, both sides of the cut", worst < TOL_SADDLE,
         f"max |I0/I2 - 5| {worst:.3e} at |h + 1/4| in {{1e-10, 1e-12}}, both sides"),
        ("I0/I2 at the saddle limit", lim < TOL_SADDLE and closed < TOL_SADDLE,
         f"|ratio - 5| {lim:.3e}; I0 vs 4 sqrt(2)/3 i rel {closed:.3e}"),
    ]


def criterion_4() -> list[Line]:
    outer = mono.fit_wronskian(mono.Pairing.X2Y_Y, -2.0, -0.26)
    inner = mono.fit_wronskian(mono.Pairing.X2Y_Y, -0.24, -0.01)
    out = [("W/(h(4h+1)) constant on (-2,-0.26) and (-0.24,-0.01)",
            max(outer.spread, inner.spread) < TOL_W_SPREAD,
            f"spreads {outer.spread:.3e}, {inner.spread:.3e} < {TOL_W_SPREAD:g}")]
    for pairing in mono.Pairing:
        _, _, ratio = mono.wronskian_jump(pairing)
        out.append((f"factor-2 jump across -1/4 [{pairing.value}]", abs(ratio - 2) < TOL_W_JUMP,
                    f"inner/outer = {ratio.real:.12f}{ratio.imag:+.1e}i"))
    return out


def criterion_5() -> list[Line]:
    worst = {}
    for h in (-0.05, -0.125, -0.2, -0.5, -1.0):
        rep = mono.verify_cycle_relations(h)
        for k, v in rep.residuals.items():
            worst[k] = max(worst.get(k, 0.0), v)
    keys = ("gplus", "gminus1", "gminus2", "d1")
    m = max(worst[k] for k in keys)
    return [("cycle relations at h in {-0.05,-0.125,-0.2,-0.5,-1}", m < TOL_CYCLES,
             ", ".join(f"{k} {worst[k]:.2e}" for k in keys))]


def random_points(n: int = N_RANDOM, seed: int = RunConfig().seed) -> list[MelnikovParams]:
    """``n`` points: one fifth on l4 = 0, the rest on RP^2."""
    rng = np.random.default_rng(seed)
    k = n // 5
    flat = rng.standard_normal((k, 2))
    full = rng.standard_normal((n - k, 3))
    pts = [MelnikovParams(a, b, 0.0) for a, b in flat] + [MelnikovParams(*v) for v in full]
    return [p.normalized() for p in pts]


def criterion_6() -> list[Line]:
    t0 = time.perf_counter()
    pts = random_points()
    counts = count_zeros_batch(pts)
    bounds = [petrov_bound(p) for p in pts]
    elapsed = time.perf_counter() - t0
    flat = [c.count for p, c in zip(pts, counts) if p.lambda4 == 0]
    every = [c.count for c in counts]
    viol = sum(b < c for b, c in zip(bounds, every))
    i0 = count_zeros([1, 0, 0])
    return [
        ("(a) l4 = 0 gives count <= 2", max(flat) <= 2,
         f"{len(flat)} points, max {max(flat)}"),
        ("(b) count <= 3 everywhere", max(every) <= 3,
         f"{len(every)} points, observed counts {sorted(set(every))}"),
        ("(c) petrov_bound >= count and bound <= 4", viol == 0 and max(bounds) <= 4,
         f"{viol} violations, max bound {max(bounds)}"),
        ("(d) count_zeros([1:0:0]) = 0", i0.count == 0 and i0.status is Status.STABLE,
         f"count {i0.count}, {i0.status.value}"),
        ("zero-count runtime", elapsed < RUNTIME_ZEROS, f"{elapsed:.1f} s < {RUNTIME_ZEROS:g} s"),
    ]


@functools.lru_cache(maxsize=None)
def scan_result(space: str, resolution: int, jobs: int = 1):
    return atlas.scan(space, resolution, jobs=jobs)


def _angle_gap(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def criterion_7() -> list[Line]:
    out = []
    res = scan_result("rp1", RP1_RES)
    step = math.pi / RP1_RES
    trans = atlas.rp1_transitions(res)
    angles = atlas.rp1_locus_angles()
    matched = {}
    for t in trans:
        kind = min(angles, key=lambda k: _angle_gap(angles[k], t.theta))
        matched[kind] = (_angle_gap(angles[kind], t.theta), t.jump)
    ok_pos = (len(trans) == 3 and len(matched) == 3
              and all(g <= step for g, _ in matched.values()))
    out.append(("RP^1: three transitions at P0, P-1/4, P_inf within one grid step", ok_pos,
                ", ".join(f"{k.value} off {g:.2e} (step {step:.2e})"
                          for k, (g, _) in matched.items())))
    counts = sorted({c.count for c in res.stable()})
    jumps_ok = (len(matched) == 3 and matched.get(LocusKind.PQUARTER, (0, 0))[1] == 2
                and matched.get(LocusKind.P0, (0, 0))[1] == 1
                and matched.get(LocusKind.PINFINITY, (0, 0))[1] == 1)
    out.append(("RP^1: counts {0,1,2}, jump 2 at P-1/4 and 1 at P0, P_inf",
                counts == [0, 1, 2] and jumps_ok,
                f"counts {counts}; regions {atlas.region_table(res)}; "
                + ", ".join(f"{k.value} jump {j}" for k, (_, j) in matched.items())))

    res2 = scan_result("rp2", RP2_RES)
    counts2 = sorted({c.count for c in res2.stable()})
    out.append(("RP^2: Stable counts are {0,1,2,3}", counts2 == [0, 1, 2, 3],
                f"observed {counts2}; region table {atlas.region_table(res2)}"))
    summary = atlas.crossing_summary(atlas.rp2_crossings(res2))
    want = {LocusKind.L0: 1, LocusKind.LINFINITY: 1, LocusKind.LQUARTER: 2, LocusKind.DELTA: 2}
    for kind, jump in want.items():
        seen = summary.get(kind, {})
        ok = bool(seen) and set(seen) == {jump}
        out.append((f"RP^2: crossing {kind.value} changes the count by {jump}", ok,
                    f"observed jumps {dict(sorted(seen.items()))}"))
    end = atlas.delta_endpoint(res2)
    grid = atlas.grid_step_angle(RP2_RES)
    out.append(("RP^2: Delta ends on l0 at [0:-5:1] within one grid step", end.error <= grid,
                f"estimate {tuple(round(x, 4) for x in end.estimate)}, off {end.error:.3e}"
                f" (step {grid:.3e}), {end.trace_points} trace points"))
    return out


def criterion_8() -> list[Line]:
    hs = np.linspace(-0.05, -0.005, 10)
    samples = verify.asymptotic_samples()
    model = pf.fit_asymptotic_constants(samples)
    errs = verify.jump_errors(hs, terms=3, scale=model.scale)
    worst = max(e for _, e in errs)
    at = max(errs, key=lambda t: t[1])[0]
    verdict = model.i4p_h2_verdict()
    rep = verify.verify_asymptotics()
    emitted = "4a1+5b2-16" in rep.table()
    return [
        ("monodromy jump of I0 vs 2 pi |-h + 3/8 h^2 - 35/64 h^3|", worst < TOL_ASYMPTOTIC,
         f"max rel {worst:.3e} at h = {at:.4f} (normalization {model.scale:.10f})"),
        ("I4' h^2 verdict emitted by verify asymptotics", emitted and verdict["holds"] == "-16",
         f"fitted {verdict['fitted']:.9f}; -16 off {verdict['error_derived']:.1e}, "
         f"-304/3 off {verdict['error_reference']:.1f}"),
    ]


def criterion_9() -> list[Line]:
    a = scan_result("rp2", RP2_RES, 1)
    b = atlas.scan("rp2", RP2_RES, jobs=2)
    c = atlas.scan("rp1", RP1_RES, jobs=1)
    d = scan_result("rp1", RP1_RES)
    same2 = (render.dataset_jsonl(a) == render.dataset_jsonl(b)
             and render.render_svg(a) == render.render_svg(b))
    same1 = (render.dataset_jsonl(c) == render.dataset_jsonl(d)
             and render.render_svg(c) == render.render_svg(d))
    reload = render.render_svg(render.load_dataset(render.dataset_jsonl(a))) == render.render_svg(a)
    return [("byte-identical dataset and SVG (jobs 1 vs 2, rerun, reload)",
             same1 and same2 and reload,
             f"rp2 jobs1/jobs2 {same2}, rp1 rerun {same1}, render reload {reload}")]


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def format_lines(n: int, lines: list[Line]) -> str:
    verdict = "PASS" if all(ok for _, ok, _ in lines) else "FAIL"
    out = [f"CRITERION {n}: {verdict}"]
    out += [f"    [{'PASS' if ok else 'FAIL'}] {name}: {detail}" for name, ok, detail in lines]
    return "\n".join(out)


# -- pytest -----------------------------------------------------------------

@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    lines = CRITERIA[n]()
    with capsys.disabled():
        print("\n" + format_lines(n, lines))
    failed = [f"{name}: {detail}" for name, ok, detail in lines if not ok]
    assert not failed, "; ".join(failed)


def main() -> int:
    ok = True
    for n, fn in CRITERIA.items():
        lines = fn()
        print(format_lines(n, lines), flush=True)
        ok &= all(x for _, x, _ in lines)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
