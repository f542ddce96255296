"""Bifurcation loci, region labels and parameter-space scans.

Parameters live on RP^1 (``[l0:l2]``, for M1) or RP^2 (``[l0:l2:l4]``).
RP^1 is sampled by the angle ``theta`` in ``[0, pi)`` and RP^2 by three
affine charts; chart ``k`` fixes ``l_k = 1`` and lets the other two
coordinates range over ``[-1, 1]^2``, so the charts tile RP^2 and meet
only along their edges.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .zeros import KeyholeContour, MelnikovParams, Status, ZeroCount, count_zeros_batch


class LocusKind(Enum):
    L0 = "L0"
    LQUARTER = "LQuarter"
    LINFINITY = "LInfinity"
    DELTA = "Delta"
    P0 = "P0"
    PQUARTER = "PQuarter"
    PINFINITY = "PInfinity"


# normals of the loci as linear forms in (l0, l2, l4); the ratios
# I0(0) : I2(0) : I4'(0) = 5 : 4 : 20 and I0(-1/4) : I2(-1/4) = 5 : 1
NORMALS = {
    LocusKind.L0: (5.0, 4.0, 20.0),
    LocusKind.LQUARTER: (0.0, 0.0, 1.0),
    LocusKind.LINFINITY: (0.0, 1.0, 0.0),
    LocusKind.DELTA: (5.0, 1.0, 5.0),
    LocusKind.P0: (5.0, 4.0, 0.0),
    LocusKind.PQUARTER: (5.0, 1.0, 0.0),
    LocusKind.PINFINITY: (0.0, 1.0, 0.0),
}
RP2_LOCI = (LocusKind.L0, LocusKind.LQUARTER, LocusKind.LINFINITY, LocusKind.DELTA)
RP1_LOCI = (LocusKind.P0, LocusKind.PQUARTER, LocusKind.PINFINITY)
# end points of the segment Delta: h* -> 0 on l0, h* -> infinity on l_inf
DELTA_END_L0 = (0.0, -5.0, 1.0)
DELTA_END_LINF = (1.0, 0.0, -1.0)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _sin_to_point(lam: np.ndarray, p) -> float:
    """Sine of the angle between the projective points ``lam`` and ``p``."""
    return float(np.linalg.norm(np.cross(_unit(lam), _unit(p))))


def on_delta_segment(lam) -> bool:
    """Whether the root ``h* = -l0 / (4 (l0 + l4))`` of beta lies on the cut."""
    l0, _, l4 = lam
    return l0 * (l0 + l4) > 0


def signed_distance(kind: LocusKind, params) -> float:
    """Normalized distance from a parameter point to a locus.

    For lines this is ``n.l / (|n| |l|)``, the sine of the angle to the
    plane; for the segment Delta points beyond its ends are measured to
    the nearer end point, keeping the sign of the line.
    """
    lam = params.vector if isinstance(params, MelnikovParams) else np.asarray(params, float)
    n = np.asarray(NORMALS[kind])
    d = float(n @ lam / (np.linalg.norm(n) * np.linalg.norm(lam)))
    if kind is LocusKind.DELTA:
        # foot of the perpendicular on the line; test whether it lies on the segment
        u = _unit(lam)
        nu = _unit(n)
        foot = u - (u @ nu) * nu
        if np.linalg.norm(foot) < 1e-15 or not on_delta_segment(foot):
            e = min(_sin_to_point(lam, DELTA_END_L0), _sin_to_point(lam, DELTA_END_LINF))
            return math.copysign(max(e, abs(d)), d if d != 0 else 1.0)
    return d


def locus_distances(params, space: str = "rp2") -> dict:
    loci = RP2_LOCI if space == "rp2" else RP1_LOCI
    return {k: signed_distance(k, params) for k in loci}


def _sign(x: float) -> int:
    return 1 if x > 0 else (-1 if x < 0 else 0)


def region_id(params, space: str = "rp2") -> str:
    """Label of the component of the complement of the loci.

    The sign vector of the line forms is made canonical by fixing the sign
    of the first nonzero entry (projective points have no sign). In RP^2
    the triangles that contain Delta are split by the sign of its line.
    """
    lam = params.vector if isinstance(params, MelnikovParams) else np.asarray(params, float)
    if space == "rp1":
        forms = [NORMALS[k] for k in RP1_LOCI]
    else:
        forms = [NORMALS[k] for k in (LocusKind.L0, LocusKind.LINFINITY, LocusKind.LQUARTER)]
    signs = [_sign(float(np.dot(f, lam))) for f in forms]
    d = _sign(float(np.dot(NORMALS[LocusKind.DELTA], lam)))
    flip = next((s for s in signs if s != 0), 1)
    signs = [s * flip for s in signs]
    d *= flip
    label = "".join("+" if s > 0 else ("-" if s < 0 else "0") for s in signs)
    if space == "rp2" and _delta_triangle(signs):
        label += "/D" + ("+" if d > 0 else ("-" if d < 0 else "0"))
    return label


def _delta_triangle(signs: Sequence[int]) -> bool:
    # Delta = [1 : -5t : t-1], t > 0 has l0-form -15 and l2 < 0, so it
    # lies in the triangles with canonical signs (+, +, +) and (+, +, -)
    return signs[0] > 0 and signs[1] > 0


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class PointClass:
    params: MelnikovParams
    count: ZeroCount
    distances: dict
    nearest_locus: LocusKind
    distance: float
    status: Status
    region: str


def _attach(params: MelnikovParams, zc: ZeroCount, space: str, tol: float) -> PointClass:
    dist = locus_distances(params, space)
    nearest = min(dist, key=lambda k: (abs(dist[k]), k.value))
    d = dist[nearest]
    status = zc.status
    if status is Status.STABLE and abs(d) < tol:
        status = Status.NEAR_BOUNDARY
    return PointClass(params, zc, dist, nearest, d, status, region_id(params, space))


def classify_point(params, tol: float = 1e-6, contour: KeyholeContour | None = None,
                   space: str | None = None) -> PointClass:
    """Zero count plus signed distances to every locus.

    The point is NearBoundary when the counter says so or when it lies
    within ``tol`` of a locus.
    """
    p = params if isinstance(params, MelnikovParams) else MelnikovParams(*params)
    p = p.normalized()
    if space is None:
        space = "rp1" if p.lambda4 == 0 else "rp2"
    zc = count_zeros_batch([p], contour)[0]
    return _attach(p, zc, space, tol)


# -- scanning ---------------------------------------------------------------

CHARTS = ("l0", "l2", "l4")


@dataclass(frozen=True)
class Cell:
    chart: str
    i: int
    j: int
    lam: tuple[float, float, float]
    count: int
    status: str
    winding_defect: float
    nearest_locus: str
    distance: float

    def record(self) -> dict:
        return {"chart": self.chart, "i": self.i, "j": self.j, "lambda": list(self.lam),
                "count": self.count, "status": self.status,
                "winding_defect": self.winding_defect,
                "nearest_locus": self.nearest_locus, "distance": self.distance}


@dataclass
class ScanResult:
    space: str
    resolution: int
    cells: list[Cell] = field(default_factory=list)

    def region(self, cell: Cell) -> str:
        return region_id(cell.lam, self.space)

    def stable(self) -> list[Cell]:
        return [c for c in self.cells if c.status == Status.STABLE.value]

    def chart_cells(self, chart: str) -> dict:
        return {(c.i, c.j): c for c in self.cells if c.chart == chart}


def grid_points(space: str, resolution: int) -> list[tuple[str, int, int, tuple]]:
    """Cell centres: angles ``pi (i + 1/2) / N`` on RP^1; chart coordinates
    ``-1 + (2i + 1)/N`` on each RP^2 chart."""
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    out = []
    if space == "rp1":
        for i in range(resolution):
            th = math.pi * (i + 0.5) / resolution
            out.append(("rp1", i, 0, (math.cos(th), math.sin(th), 0.0)))
        return out
    if space != "rp2":
        raise ValueError("space must be 'rp1' or 'rp2'")
    ticks = [-1.0 + (2 * k + 1) / resolution for k in range(resolution)]
    for chart in CHARTS:
        for i, u in enumerate(ticks):
            for j, v in enumerate(ticks):
                out.append((chart, i, j, chart_to_lambda(chart, u, v)))
    return out


def chart_to_lambda(chart: str, u: float, v: float) -> tuple[float, float, float]:
    """Chart coordinates to ``(l0, l2, l4)``: the two free coordinates
    are taken in index order."""
    if chart == "l0":
        return (1.0, u, v)
    if chart == "l2":
        return (u, 1.0, v)
    if chart == "l4":
        return (u, v, 1.0)
    raise ValueError(f"unknown chart {chart}")


def lambda_to_chart(chart: str, lam) -> tuple[float, float] | None:
    l0, l2, l4 = (float(x) for x in lam)
    k = {"l0": l0, "l2": l2, "l4": l4}[chart]
    if k == 0:
        return None
    if chart == "l0":
        return l2 / k, l4 / k
    if chart == "l2":
        return l0 / k, l4 / k
    return l0 / k, l2 / k


def _count_chunk(args) -> list[ZeroCount]:
    lams, contour = args
    return count_zeros_batch([MelnikovParams(*l) for l in lams], contour)


def scan(space: str, resolution: int, contour: KeyholeContour | None = None,
         jobs: int = 1, chunk: int = 512) -> ScanResult:
    """Classify every cell of the grid; failures are recorded, not raised.

    Work is split into fixed chunks in grid order and mapped over ``jobs``
    processes; the merge is in grid order, so the result does not depend
    on ``jobs``.
    """
    contour = contour or KeyholeContour()
    pts = grid_points(space, resolution)
    tol = 2.0 / resolution
    params = [MelnikovParams(*p[3]).normalized() for p in pts]
    batches = [([q.vector.tolist() for q in params[k:k + chunk]], contour)
               for k in range(0, len(params), chunk)]
    if jobs > 1 and len(batches) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            counts = [zc for part in ex.map(_count_chunk, batches) for zc in part]
    else:
        counts = [zc for b in batches for zc in _count_chunk(b)]
    result = ScanResult(space, resolution)
    for (chart, i, j, _), p, zc in zip(pts, params, counts):
        pc = _attach(p, zc, space, tol)
        result.cells.append(Cell(chart, i, j, (p.lambda0, p.lambda2, p.lambda4),
                                 zc.count, pc.status.value, zc.winding_defect,
                                 pc.nearest_locus.value, pc.distance))
    return result


def default_jobs() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity")
               else (os.cpu_count() or 1))


# -- scan analysis ----------------------------------------------------------

def region_counts(result: ScanResult) -> dict:
    """Counts of Stable cells per (region, count)."""
    out: dict = {}
    for c in result.stable():
        key = (result.region(c), c.count)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


def region_table(result: ScanResult) -> dict:
    """Region label to its majority count among Stable cells."""
    best: dict = {}
    for (reg, cnt), n in region_counts(result).items():
        if reg not in best or n > best[reg][1]:
            best[reg] = (cnt, n)
    return {r: v[0] for r, v in best.items()}


@dataclass(frozen=True)
class Transition:
    theta: float
    left: int
    right: int

    @property
    def jump(self) -> int:
        return abs(self.right - self.left)


def rp1_transitions(result: ScanResult) -> list[Transition]:
    """Count changes between consecutive Stable cells around RP^1, placed
    at the midpoint of the gap between them."""
    cells = sorted(result.cells, key=lambda c: c.i)
    n = len(cells)
    step = math.pi / n
    stable = [c for c in cells if c.status == Status.STABLE.value]
    out = []
    for a, b in zip(stable, stable[1:] + stable[:1]):
        if a.count == b.count:
            continue
        ia, ib = a.i, b.i if b.i > a.i else b.i + n
        theta = ((ia + ib) / 2 + 0.5) * step % math.pi
        out.append(Transition(theta, a.count, b.count))
    return out


def rp1_locus_angles() -> dict:
    """Angles in [0, pi) of the RP^1 loci."""
    out = {}
    for k in RP1_LOCI:
        a, b, _ = NORMALS[k]
        # a cos t + b sin t = 0
        out[k] = math.atan2(-a, b) % math.pi
    return out


@dataclass(frozen=True)
class Crossing:
    locus: LocusKind
    left: int
    right: int
    midpoint: tuple[float, float, float]
    chart: str

    @property
    def jump(self) -> int:
        return abs(self.right - self.left)


def separating_locus(a, b) -> LocusKind | None:
    """The single RP^2 locus crossed between two nearby points, if exactly
    one is crossed. A sign change of the Delta line counts only where the
    crossing lies on the segment."""
    a = _unit(a)
    b = _unit(b)
    if np.dot(a, b) < 0:
        b = -b
    crossed = []
    for kind in (LocusKind.L0, LocusKind.LINFINITY, LocusKind.LQUARTER, LocusKind.DELTA):
        n = np.asarray(NORMALS[kind])
        fa, fb = float(n @ a), float(n @ b)
        if fa * fb > 0:
            continue
        if kind is LocusKind.DELTA:
            t = fa / (fa - fb) if fa != fb else 0.5
            if not on_delta_segment(a + t * (b - a)):
                continue
        crossed.append(kind)
    return crossed[0] if len(crossed) == 1 else None


def rp2_crossings(result: ScanResult, max_gap: int | None = None) -> list[Crossing]:
    """Count jumps along grid rows and columns of each chart.

    Consecutive Stable cells on one grid line, separated by at most
    ``max_gap`` non-Stable cells, whose regions differ by exactly one
    locus give one crossing of that locus.
    """
    n = result.resolution
    if max_gap is None:
        max_gap = max(6, n // 8)
    out = []
    for chart in CHARTS:
        grid = result.chart_cells(chart)
        lines = [[grid[(i, j)] for j in range(n)] for i in range(n)]
        lines += [[grid[(i, j)] for i in range(n)] for j in range(n)]
        for line in lines:
            last = None
            gap = 0
            for c in line:
                if c.status != Status.STABLE.value:
                    gap += 1
                    continue
                if last is not None and gap <= max_gap:
                    locus = separating_locus(last.lam, c.lam)
                    if locus is not None:
                        a = _unit(last.lam)
                        b = _unit(c.lam)
                        mid = tuple(float(x) for x in (a + b * np.sign(a @ b)) / 2)
                        out.append(Crossing(locus, last.count, c.count, mid, chart))
                last = c
                gap = 0
    return out


def crossing_summary(crossings: Iterable[Crossing]) -> dict:
    """Locus to the multiset of observed jumps."""
    out: dict = {}
    for c in crossings:
        d = out.setdefault(c.locus, {})
        d[c.jump] = d.get(c.jump, 0) + 1
    return out


@dataclass(frozen=True)
class DeltaEnd:
    estimate: tuple[float, float, float]
    error: float
    nearest_trace: float
    trace_points: int


def delta_endpoint(result: ScanResult) -> DeltaEnd:
    """Where the Delta count jumps end near l0.

    The jump midpoints are fitted with a projective line, intersected with
    l0 and compared with ``[0:-5:1]``; distances are sines of angles.
    ``nearest_trace`` is how close the observed trace comes to l0.
    """
    pts = [np.asarray(c.midpoint) for c in rp2_crossings(result)
           if c.locus is LocusKind.DELTA and c.jump > 0]
    if len(pts) < 2:
        return DeltaEnd((math.nan,) * 3, math.inf, math.inf, len(pts))
    a = np.array([_unit(p) for p in pts])
    # plane through the origin best fitting the trace directions
    _, _, vt = np.linalg.svd(a)
    normal = vt[-1]
    end = np.cross(normal, np.asarray(NORMALS[LocusKind.L0]))
    end = _unit(end)
    if np.dot(end, DELTA_END_L0) < 0:
        end = -end
    err = _sin_to_point(end, DELTA_END_L0)
    l0n = _unit(NORMALS[LocusKind.L0])
    nearest = min(abs(float(np.dot(_unit(p), l0n))) for p in pts)
    return DeltaEnd(tuple(float(x) for x in end), err, nearest, len(pts))


def grid_step_angle(resolution: int) -> float:
    """Angular size of one chart cell at its largest (chart centre)."""
    return 2.0 / resolution
