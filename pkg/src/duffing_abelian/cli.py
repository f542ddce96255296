"""``duffing-abelian`` command line.

Exit codes: 0 success, 1 failed verification, 2 domain error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from pathlib import Path

from . import atlas, render, verify
from . import monodromy as mono
from . import picard_fuchs as pf
from .config import RunConfig, load_config
from .errors import DomainError, NumericalFailure, PathTooClose, SingularEnergy
from .level_curve import Cycle, CycleSpec, Side, integrate_cycle, integrate_cycle_derivative
from .zeros import MelnikovParams, count_zeros, petrov_bound

log = logging.getLogger("duffing_abelian")

EXIT_OK, EXIT_FAILED, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` also accepted)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainError("empty complex number")
    # a bare "i" means a unit coefficient
    s = re.sub(r"(^|[+-])[ij]$", r"\g<1>1j", s).replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise DomainError(f"cannot parse complex number {text!r}") from None


def fmt(z: complex | float) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.16e}"
    return f"{z.real:.16e}{z.imag:+.16e}i"


def _table(rows: list[tuple[str, str]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


# -- eval -------------------------------------------------------------------

def _component(v: pf.PeriodVector, i: int) -> complex:
    return {0: v.I0, 2: v.I2, 4: v.i4prime}[i]


def _quadrature(i: int, spec: CycleSpec, h: float, rtol: float) -> complex:
    if i == 4:
        return integrate_cycle_derivative(spec, 4, h, rtol)
    return integrate_cycle(spec, i, h, rtol)


def cmd_eval(args, cfg: RunConfig) -> int:
    h = parse_complex(args.h)
    i = args.i
    name = "I4'" if i == 4 else f"I{i}"
    side = Side(args.side) if args.side else Side.NOT_ON_CUT
    cycle = Cycle(args.cycle)
    rows = [("integral", name + (f" over {cycle.value}" if cycle is not Cycle.GAMMA else "")),
            ("h", fmt(h))]
    if h.imag == 0 and h.real == -0.25 and i == 4:
        raise SingularEnergy("I4' has a pole at h = -1/4")
    if cycle is not Cycle.GAMMA:
        if h.imag != 0:
            raise DomainError("vanishing cycles are evaluated at real h only")
        rows += [("value", fmt(_quadrature(i, CycleSpec(cycle), h.real, cfg.quad_rtol))),
                 ("source", "quadrature")]
    elif h.imag == 0 and h.real >= 0:
        q = _quadrature(i, CycleSpec(Cycle.GAMMA), h.real, cfg.quad_rtol)
        rows += [("value", fmt(q)), ("source", "quadrature")]
        try:
            c = _component(pf.evaluate(h, cfg.ode_rtol, cfg.ode_atol), i)
        except DomainError:
            pass
        else:
            rows += [("continuation", fmt(c)),
                     ("difference", fmt(abs(q - c)))]
    elif h.imag == 0:
        if side is Side.NOT_ON_CUT:
            raise PathTooClose(f"h = {h.real} lies on the cut; pass --side upper|lower")
        if h.real == -0.25:
            i0, i2 = mono.saddle_value(side)
            rows += [("value", fmt(i0 if i == 0 else i2)), ("source", f"local series ({side.value})")]
        else:
            b = mono.boundary_value(h.real, side, tol=cfg.extrap_tol)
            rows += [("value", fmt({0: b.I0, 2: b.I2, 4: b.I4p}[i])),
                     ("source", f"boundary value ({side.value})"),
                     ("extrapolation_error", fmt(b.error))]
    else:
        v = pf.evaluate(h, cfg.ode_rtol, cfg.ode_atol)
        rows += [("value", fmt(_component(v, i))), ("source", "continuation")]
    print(_table(rows))
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig) -> int:
    report = verify.SUITES[args.suite]()
    print(report.table())
    print(f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_FAILED


# -- count ------------------------------------------------------------------

def cmd_count(args, cfg: RunConfig) -> int:
    p = MelnikovParams(args.l0, args.l2, args.l4).normalized()
    zc = count_zeros(p, cfg.contour)
    out = zc.as_dict()
    out["lambda"] = [p.lambda0, p.lambda2, p.lambda4]
    out["windings"] = list(zc.windings)
    out["region_id"] = atlas.region_id(p, "rp1" if p.lambda4 == 0 else "rp2")
    if args.petrov:
        out["petrov_bound"] = petrov_bound(p)
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


# -- scan / render ----------------------------------------------------------

def _angle_gap(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def cmd_scan(args, cfg: RunConfig) -> int:
    jobs = args.jobs if args.jobs is not None else (cfg.jobs or atlas.default_jobs())
    result = atlas.scan(args.space, args.resolution, cfg.contour, jobs=jobs)
    prefix = Path(args.out if args.out else cfg.out) / f"{args.space}_{args.resolution}"
    paths = render.write_outputs(result, prefix)
    stable = len(result.stable())
    rows = [("cells", str(len(result.cells))),
            ("stable_fraction", fmt(stable / len(result.cells)))]
    counts = sorted({c.count for c in result.stable()})
    rows.append(("stable_counts", ",".join(str(c) for c in counts)))
    for region, count in atlas.region_table(result).items():
        rows.append((f"region {region}", str(count)))
    if args.space == "rp1":
        angles = atlas.rp1_locus_angles()
        for t in atlas.rp1_transitions(result):
            kind = min(angles, key=lambda k: _angle_gap(angles[k], t.theta))
            rows.append((f"transition near {kind.value}",
                         f"theta={fmt(t.theta)} {t.left}->{t.right}"))
    for key, path in paths.items():
        rows.append((key, str(path)))
    print(_table(rows))
    return EXIT_OK


def cmd_render(args, cfg: RunConfig) -> int:
    src = Path(args.dataset)
    result = render.load_dataset(src.read_text())
    out = Path(args.out) if args.out else src.with_suffix(".svg")
    out.write_text(render.render_svg(result))
    print(out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="key = value file")
    g.add_argument("--quad-rtol", type=float, dest="quad_rtol")
    g.add_argument("--ode-rtol", type=float, dest="ode_rtol")
    g.add_argument("--ode-atol", type=float, dest="ode_atol")
    g.add_argument("--extrap-tol", type=float, dest="extrap_tol")
    g.add_argument("--defect-tol", type=float, dest="defect_tol")
    g.add_argument("--R", type=float, dest="R", help="outer contour radius")
    g.add_argument("--delta", type=float, help="distance of the keyhole from the cut")
    g.add_argument("--seed", type=int)
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="duffing-abelian",
        description="Abelian integrals of the Duffing oscillator and zeros of their combinations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate I0, I2 or I4' at h")
    p.add_argument("--i", type=int, choices=(0, 2, 4), required=True,
                   help="form x^i y dx; 4 selects I4' = d/dh of the x^4 y dx integral")
    p.add_argument("--h", required=True, help="energy, e.g. 1, -0.125+0.001i")
    p.add_argument("--cycle", choices=[c.value for c in Cycle], default=Cycle.GAMMA.value)
    p.add_argument("--side", choices=(Side.UPPER.value, Side.LOWER.value))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", parents=[common], help="run an identity suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", parents=[common], help="count zeros of l0 I0 + l2 I2 + l4 I4'")
    p.add_argument("l0", type=float)
    p.add_argument("l2", type=float)
    p.add_argument("l4", type=float, nargs="?", default=0.0)
    p.add_argument("--petrov", action="store_true", help="also print the Petrov bound")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("scan", parents=[common], help="scan RP^1 or RP^2")
    p.add_argument("--space", choices=("rp1", "rp2"), default="rp2")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, help="worker processes (default: available cores)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("render", parents=[common], help="render a saved dataset to SVG")
    p.add_argument("dataset")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


_CONFIG_KEYS = ("quad_rtol", "ode_rtol", "ode_atol", "extrap_tol", "defect_tol", "R",
                "delta", "seed")


def _join_values(argv: list[str]) -> list[str]:
    # "--h -1-2i" would otherwise be read as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--h":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--h={nxt}")
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        flags = {k: getattr(args, k) for k in _CONFIG_KEYS}
        cfg = load_config(args.config, flags)
        return args.func(args, cfg)
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
