"""Zero counting for M = l0*I0 + l2*I2 + l4*I4' by the argument principle.

The period vector is tabulated once per contour along the upper half of
the keyhole (big arc, the line Im h = delta, the small arc around 0) and
mirrored by conjugation, so a batch of parameter points costs one table
plus one pass of the winding kernel. Segments whose phase step exceeds
pi/2 for a given parameter are bisected with values evaluated on demand.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from . import picard_fuchs as pf
from .errors import DomainError

MAX_STEP = math.pi / 2
DEFECT_TOL = 1e-3
BOUNDARY_RATIO = 1e-6


@dataclass(frozen=True)
class MelnikovParams:
    lambda0: float
    lambda2: float
    lambda4: float = 0.0

    def __post_init__(self):
        if self.lambda0 == 0 and self.lambda2 == 0 and self.lambda4 == 0:
            raise DomainError("parameters must not all vanish")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.lambda0, self.lambda2, self.lambda4], dtype=float)

    def normalized(self) -> "MelnikovParams":
        """Unit Euclidean norm, first nonzero coordinate positive."""
        v = self.vector
        v = v / np.linalg.norm(v)
        first = v[np.nonzero(v)[0][0]]
        if first < 0:
            v = -v
        return MelnikovParams(float(v[0]), float(v[1]), float(v[2]))


@dataclass(frozen=True)
class KeyholeContour:
    """Boundary of ``{|h| <= R}`` minus the ``delta``-neighbourhood of the cut."""

    R: float = 1e8
    delta: float = 1e-6
    max_points: int = 200_000
    max_depth: int = 24
    arc_points: int = 1024
    per_decade: int = 48
    # accepted distance of a winding from the nearest integer
    defect_tol: float = DEFECT_TOL

    def __post_init__(self):
        if not (self.R > 1 and 0 < self.delta < 0.125):
            raise DomainError("contour needs R > 1 and 0 < delta < 1/8")
        if not self.defect_tol > 0:
            raise DomainError("defect_tol must be positive")

    def halved(self) -> "KeyholeContour":
        return replace(self, delta=self.delta / 2)

    def doubled(self) -> "KeyholeContour":
        return replace(self, R=2 * self.R)


class Status(Enum):
    STABLE = "Stable"
    NEAR_BOUNDARY = "NearBoundary"
    FAILED = "Failed"


@dataclass(frozen=True)
class ZeroCount:
    count: int
    winding_defect: float
    min_modulus_on_contour: float
    status: Status
    windings: tuple[float, ...] = ()

    def as_dict(self) -> dict:
        return {"count": self.count, "status": self.status.value,
                "winding_defect": self.winding_defect,
                "min_modulus_on_contour": self.min_modulus_on_contour}


# -- contour tables ---------------------------------------------------------

_ARC, _LINE, _SMALL = 0, 1, 2


def _line_abscissae(R: float, delta: float, per_decade: int) -> np.ndarray:
    """Nodes on ``[-sqrt(R^2 - delta^2), 0]``, dense near -1/4 and 0."""
    rho = pf.LOCAL_RADIUS
    x_start = -math.sqrt(R * R - delta * delta)

    def geo(hi, lo):
        n = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
        return np.geomspace(hi, lo, n)

    far = -0.25 - geo(-0.25 - x_start, rho)
    tiny = delta / 10
    near_q = np.concatenate([-0.25 - geo(rho, tiny)[1:], [-0.25],
                             -0.25 + geo(rho, tiny)[::-1][:-1]])
    gap = np.linspace(-0.25 + rho, -rho, 9)[1:-1]
    near_0 = np.concatenate([-geo(rho, tiny), [0.0]])
    xs = np.concatenate([far, near_q, gap, near_0])
    xs[0] = x_start
    return np.unique(xs)


class ContourTable:
    """Period vectors at the nodes of a keyhole contour."""

    def __init__(self, contour: KeyholeContour):
        self.contour = contour
        R, delta = contour.R, contour.delta
        self.theta_end = math.pi - math.asin(delta / R)
        kinds, params, hs = [], [], []
        for th in np.linspace(0.0, self.theta_end, contour.arc_points):
            kinds.append(_ARC)
            params.append(float(th))
            hs.append(complex(R * math.cos(th), R * math.sin(th)))
        hs[-1] = complex(-math.sqrt(R * R - delta * delta), delta)
        for x in _line_abscissae(R, delta, contour.per_decade)[1:]:
            kinds.append(_LINE)
            params.append(float(x))
            hs.append(complex(x, delta))
        for phi in np.linspace(math.pi / 2, 0.0, 33)[1:]:
            kinds.append(_SMALL)
            params.append(float(phi))
            hs.append(complex(delta * math.cos(phi), delta * math.sin(phi)))
        hs[-1] = complex(delta, 0.0)
        self.kinds = np.array(kinds)
        self.params = np.array(params)
        self.upper_h = np.array(hs)
        self.n_upper = len(hs)
        i0, i2 = self._tabulate()
        self.upper_i0, self.upper_i2 = i0, i2
        self.upper_i4 = (4 * self.upper_h * i0 + 5 * i2) / (4 * self.upper_h + 1)
        n = self.n_upper
        lower = np.arange(n - 2, 0, -1)
        self.h = np.concatenate([self.upper_h, self.upper_h[lower].conj()])
        self.i0 = np.concatenate([i0, i0[lower].conj()])
        self.i2 = np.concatenate([i2, i2[lower].conj()])
        self.i4 = np.concatenate([self.upper_i4, self.upper_i4[lower].conj()])
        self._mid: dict = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.h)

    def _tabulate(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.n_upper
        i0 = np.empty(n, dtype=complex)
        i2 = np.empty(n, dtype=complex)
        R = self.contour.R
        start = pf.evaluate(complex(R, 0.0))
        y = (start.I0, start.I2)
        i0[0], i2[0] = y
        dt = 0.0
        for k in range(1, n):
            kind, p, h = self.kinds[k], self.params[k], self.upper_h[k]
            if kind == _ARC:
                th0 = self.params[k - 1]
                y, dt, _ = pf.integrate_piece(1, 0j, 0j, R, th0, p, y, dt=dt)
            elif self._in_disc(h):
                y = self._series(h)
            else:
                prev = self.upper_h[k - 1]
                if self._in_disc(prev):
                    # re-enter the ODE from the series value
                    y = (i0[k - 1], i2[k - 1])
                y, dt, _ = pf.integrate_piece(0, prev, h, 0.0, 0.0, 0.0, y, dt=dt)
            i0[k], i2[k] = y
        return i0, i2

    @staticmethod
    def _in_disc(h: complex) -> bool:
        return abs(h) < pf.LOCAL_RADIUS or abs(h + 0.25) < pf.LOCAL_RADIUS

    @staticmethod
    def _series(h: complex) -> tuple[complex, complex]:
        v = pf.evaluate_upper_closure(h)
        return v.I0, v.I2

    def _upper_point(self, seg: int, f: float) -> tuple[complex, complex, complex]:
        """(h, I0, I2) at fraction ``f`` of upper segment ``seg``."""
        key = (seg, f)
        hit = self._mid.get(key)
        if hit is not None:
            return hit
        kind = self.kinds[seg + 1]
        p0, p1 = self.params[seg], self.params[seg + 1]
        p = p0 + f * (p1 - p0)
        R, delta = self.contour.R, self.contour.delta
        y0 = (self.upper_i0[seg], self.upper_i2[seg])
        if kind == _ARC:
            h = complex(R * math.cos(p), R * math.sin(p))
            y, _, _ = pf.integrate_piece(1, 0j, 0j, R, p0, p, y0)
        elif kind == _LINE:
            h = complex(p, delta)
            if self._in_disc(h):
                y = self._series(h)
            else:
                y, _, _ = pf.integrate_piece(0, self.upper_h[seg], h, 0.0, 0.0, 0.0, y0)
        else:
            h = complex(delta * math.cos(p), delta * math.sin(p))
            y = self._series(h)
        value = (h, complex(y[0]), complex(y[1]))
        with self._lock:
            return self._mid.setdefault(key, value)

    def point(self, k: int, f: float) -> tuple[complex, complex, complex]:
        """(h, I0, I2) at fraction ``f`` along segment ``k -> k+1`` of the
        closed contour."""
        n = self.n_upper
        if k < n - 1:
            return self._upper_point(k, f)
        u = 2 * n - 2 - k
        h, a, b = self._upper_point(u - 1, 1.0 - f)
        return h.conjugate(), a.conjugate(), b.conjugate()


_tables: dict = {}
_tables_lock = threading.Lock()


def contour_table(contour: KeyholeContour) -> ContourTable:
    key = (contour.R, contour.delta, contour.arc_points, contour.per_decade)
    table = _tables.get(key)
    if table is None:
        with _tables_lock:
            table = _tables.get(key)
            if table is None:
                table = ContourTable(contour)
                _tables[key] = table
    return table


# -- evaluation -------------------------------------------------------------

def _as_params(params) -> MelnikovParams:
    if isinstance(params, MelnikovParams):
        return params
    return MelnikovParams(*[float(x) for x in params])


def eval_M(params, h: complex) -> complex:
    p = _as_params(params)
    v = pf.evaluate(h)
    return p.lambda0 * v.I0 + p.lambda2 * v.I2 + p.lambda4 * v.i4prime


def alpha_beta(params, h: complex) -> tuple[complex, complex]:
    """``alpha = (4h+1) l2 + 5 l4``, ``beta = (4h+1) l0 + 4h l4``."""
    p = _as_params(params)
    q = 4 * h + 1
    return q * p.lambda2 + 5 * p.lambda4, q * p.lambda0 + 4 * h * p.lambda4


def alpha_root(params) -> float | None:
    p = _as_params(params)
    if p.lambda2 == 0:
        return None
    return -(p.lambda2 + 5 * p.lambda4) / (4 * p.lambda2)


def eval_F(params, h: complex, check: float = 1e-10) -> complex:
    """``(4h+1) M / I0``, or ``M1 / I0`` when ``l4 = 0``.

    For ``l4 != 0`` the value is also formed as ``alpha I2/I0 + beta`` and
    the two must agree to ``check``.
    """
    p = _as_params(params)
    h = complex(h)
    v = pf.evaluate(h)
    m = p.lambda0 * v.I0 + p.lambda2 * v.I2 + p.lambda4 * v.i4prime
    if p.lambda4 == 0:
        return m / v.I0
    f1 = (4 * h + 1) * m / v.I0
    a, b = alpha_beta(p, h)
    f2 = a * v.I2 / v.I0 + b
    if abs(f1 - f2) > check * max(abs(f1), abs(f2), 1.0):
        raise ArithmeticError(f"F formulas disagree at h = {h}: {f1} vs {f2}")
    return f2


# -- winding ----------------------------------------------------------------

@dataclass
class _Run:
    winding: float
    min_ratio: float
    failed: bool


def _phase(a: complex, b: complex) -> float:
    """Argument increment from ``a`` to ``b`` in (-pi, pi]."""
    z = b * a.conjugate()
    return math.atan2(z.imag, z.real)


def _refine(table: ContourTable, lam: np.ndarray, max_points: int,
            max_depth: int) -> _Run:
    l0, l2, l4 = (float(x) for x in lam)
    m = l0 * table.i0 + l2 * table.i2 + l4 * table.i4
    scale = abs(l0) * np.abs(table.i0) + abs(l2) * np.abs(table.i2) + abs(l4) * np.abs(table.i4)
    min_ratio = float(np.min(np.abs(m) / scale))
    n = len(m)
    prod = np.roll(m, -1) * m.conj()
    steps = np.arctan2(prod.imag, prod.real)
    bad = np.nonzero(np.abs(steps) > MAX_STEP)[0]
    budget = [max_points - n]
    failed = [False]

    def value(k, f):
        h, a, b = table.point(int(k), f)
        i4 = (4 * h * a + 5 * b) / (4 * h + 1)
        return (l0 * a + l2 * b + l4 * i4,
                abs(l0) * abs(a) + abs(l2) * abs(b) + abs(l4) * abs(i4))

    def split(k, f0, f1, v0, v1, depth):
        st = _phase(v0, v1)
        if abs(st) <= MAX_STEP:
            return st, math.inf
        if depth >= max_depth or budget[0] <= 0:
            failed[0] = True
            return st, math.inf
        budget[0] -= 1
        fm = 0.5 * (f0 + f1)
        vm, sm = value(k, fm)
        a, ra = split(k, f0, fm, v0, vm, depth + 1)
        b, rb = split(k, fm, f1, vm, v1, depth + 1)
        return a + b, min(ra, rb, abs(vm) / sm)

    for k in bad:
        st, r = split(k, 0.0, 1.0, m[k], m[(k + 1) % n], 0)
        steps[k] = st
        min_ratio = min(min_ratio, r)
    total = float(np.cumsum(steps)[-1])
    return _Run(total, min_ratio, failed[0])


def endpoint_ratios(lams: np.ndarray) -> np.ndarray:
    """Smallest relative modulus of M at the cut's finite ends.

    ``M(0)`` and, when ``l4 = 0``, ``M(-1/4)`` are limits of M along the
    keyhole boundary; a zero there sits on the contour for every delta.
    """
    ends = []
    for c in (0.0, -0.25):
        v = pf.evaluate_upper_closure(complex(c, 0.0))
        ends.append((v.I0, v.I2))
    (a0, b0), (aq, bq) = ends
    i4_0 = 5 * b0
    out = np.empty(len(lams))
    for k, (l0, l2, l4) in enumerate(lams):
        r = abs(l0 * a0 + l2 * b0 + l4 * i4_0) / (abs(l0 * a0) + abs(l2 * b0) + abs(l4 * i4_0))
        if l4 == 0:
            r = min(r, abs(l0 * aq + l2 * bq) / (abs(l0 * aq) + abs(l2 * bq)))
        out[k] = r
    return out


def _runs(table: ContourTable, lams: np.ndarray, contour: KeyholeContour) -> list[_Run]:
    total, max_step, min_ratio = kernels.winding_batch(table.i0, table.i2, table.i4, lams)
    out = []
    for k in range(len(lams)):
        if max_step[k] > MAX_STEP:
            out.append(_refine(table, lams[k], contour.max_points, contour.max_depth))
        else:
            out.append(_Run(float(total[k]), float(min_ratio[k]), False))
    return out


def _classify(runs: Sequence[_Run], end_ratio: float, defect_tol: float = DEFECT_TOL) -> ZeroCount:
    windings = tuple(r.winding / (2 * math.pi) for r in runs)
    counts = [int(round(w)) for w in windings]
    defect = max(abs(w - c) for w, c in zip(windings, counts))
    min_ratio = min(min(r.min_ratio for r in runs), end_ratio)
    count = counts[0]
    if any(r.failed for r in runs) or count < 0:
        status = Status.FAILED
    elif min_ratio < BOUNDARY_RATIO or len(set(counts)) > 1 or defect >= defect_tol:
        status = Status.NEAR_BOUNDARY
    else:
        status = Status.STABLE
    return ZeroCount(max(count, 0), defect, min_ratio, status, windings)


def count_zeros_batch(params: Iterable, contour: KeyholeContour | None = None) -> list[ZeroCount]:
    """Zero counts of M in the keyhole for many parameter points.

    Each point is wound on the contour, on the contour with ``delta/2`` and
    on the contour with ``2R``; a count is Stable when all three agree,
    the winding is integral to ``contour.defect_tol`` and ``|M|`` stays above ``1e-6``
    times ``|l0 I0| + |l2 I2| + |l4 I4'|`` on the contour and at its limit
    points h = 0 and h = -1/4.
    """
    contour = contour or KeyholeContour()
    plist = [_as_params(p).normalized() for p in params]
    if not plist:
        return []
    lams = np.array([p.vector for p in plist])
    variants = (contour, contour.halved(), contour.doubled())
    per_variant = [_runs(contour_table(c), lams, c) for c in variants]
    ends = endpoint_ratios(lams)
    return [_classify([runs[k] for runs in per_variant], float(ends[k]), contour.defect_tol)
            for k in range(len(plist))]


def count_zeros(params, contour: KeyholeContour | None = None) -> ZeroCount:
    return count_zeros_batch([params], contour)[0]


# -- Petrov bound -----------------------------------------------------------

def circle_variation(params, R: float, points: int = 2048) -> float:
    """Argument increase of F along ``|h| = R`` from ``arg = -pi`` to ``pi``.

    Only the open arc is used; F is evaluated from a table along the
    circle (period vector continued by the ODE).
    """
    p = _as_params(params).normalized()
    table = contour_table(KeyholeContour(R=R, arc_points=points))
    n = table.contour.arc_points
    h = table.upper_h[:n]
    i0, i2, i4 = table.upper_i0[:n], table.upper_i2[:n], table.upper_i4[:n]
    h = np.concatenate([h[::-1].conj(), h[1:]])
    i0 = np.concatenate([i0[::-1].conj(), i0[1:]])
    i2 = np.concatenate([i2[::-1].conj(), i2[1:]])
    i4 = np.concatenate([i4[::-1].conj(), i4[1:]])
    m = p.lambda0 * i0 + p.lambda2 * i2 + p.lambda4 * i4
    f = m / i0 if p.lambda4 == 0 else (4 * h + 1) * m / i0
    prod = f[1:] * f[:-1].conj()
    return float(np.sum(np.arctan2(prod.imag, prod.real)))


def petrov_bound(params, R: float = 50.0) -> int:
    """Upper bound for the zeros of M in the cut plane.

    ``floor(var_circle arg F / 2 pi) + k + 1`` with ``k`` the number of
    roots in ``(-R, 0)`` of ``alpha(h) h (4h+1)`` (of ``h(4h+1)`` when
    ``l4 = 0``). A point with ``l2 = l4 = 0`` is a multiple of I0, which
    has no zeros.
    """
    p = _as_params(params).normalized()
    if p.lambda2 == 0 and p.lambda4 == 0:
        return 0
    roots = {-0.25}
    if p.lambda4 != 0:
        ha = alpha_root(p)
        if ha is not None and -R < ha < 0:
            roots.add(ha)
    var = circle_variation(p, R)
    return int(math.floor(var / (2 * math.pi))) + len(roots) + 1
