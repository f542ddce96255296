"""Deterministic SVG, JSON Lines and CSV output for scan results."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .atlas import (CHARTS, NORMALS, RP1_LOCI, RP2_LOCI, Cell, LocusKind, ScanResult,
                    lambda_to_chart, on_delta_segment, region_counts, rp1_locus_angles)

COLORS = {0: "#f2f0f7", 1: "#bcbddc", 2: "#807dba", 3: "#4a1486"}
OTHER_COLOR = "#fdae6b"
LOCUS_STYLE = {
    LocusKind.L0: ("#d62728", "none"),
    LocusKind.LQUARTER: ("#000000", "none"),
    LocusKind.LINFINITY: ("#1f77b4", "none"),
    LocusKind.DELTA: ("#000000", "6,3"),
    LocusKind.P0: ("#d62728", "none"),
    LocusKind.PQUARTER: ("#000000", "none"),
    LocusKind.PINFINITY: ("#1f77b4", "none"),
}
PANEL = 320.0
MARGIN = 40.0


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _color(cell: Cell) -> str:
    return COLORS.get(cell.count, OTHER_COLOR)


def _header(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="4" height="4">',
        '<path d="M0,4 L4,0" stroke="#444444" stroke-width="0.6"/>',
        "</pattern>",
        "</defs>",
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>',
    ]


def _legend(x: float, y: float) -> list[str]:
    out = ['<g id="legend" font-family="sans-serif" font-size="11">']
    for k, (cnt, col) in enumerate(sorted(COLORS.items())):
        yy = y + 16 * k
        out.append(f'<rect x="{_f(x)}" y="{_f(yy)}" width="12" height="12" fill="{col}" '
                   f'stroke="#000000" stroke-width="0.5"/>')
        out.append(f'<text x="{_f(x + 18)}" y="{_f(yy + 10)}">{cnt} zeros</text>')
    yy = y + 16 * len(COLORS)
    out.append(f'<rect x="{_f(x)}" y="{_f(yy)}" width="12" height="12" fill="url(#hatch)" '
               f'stroke="#000000" stroke-width="0.5"/>')
    out.append(f'<text x="{_f(x + 18)}" y="{_f(yy + 10)}">near boundary / failed</text>')
    out.append("</g>")
    return out


def _great_circle(normal, samples: int = 2048) -> np.ndarray:
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    a = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = a - (a @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    t = np.linspace(0.0, 2 * math.pi, samples + 1)
    return np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2)


def _locus_path(kind: LocusKind, chart: str, x0: float, y0: float) -> str:
    """Polyline of a locus inside one chart square, broken where it leaves."""
    idx = {"l0": 0, "l2": 1, "l4": 2}[chart]
    pieces: list[list[tuple[float, float]]] = []
    cur: list[tuple[float, float]] = []
    for lam in _great_circle(NORMALS[kind]):
        visible = abs(lam[idx]) > 1e-12 and np.max(np.abs(lam)) <= abs(lam[idx]) * (1 + 1e-12)
        if visible and kind is LocusKind.DELTA:
            visible = on_delta_segment(lam)
        if visible:
            u, v = lambda_to_chart(chart, lam)
            p = (x0 + (u + 1) / 2 * PANEL, y0 + (1 - (v + 1) / 2) * PANEL)
            if cur and math.hypot(p[0] - cur[-1][0], p[1] - cur[-1][1]) > PANEL / 4:
                pieces.append(cur)
                cur = []
            cur.append(p)
        elif cur:
            pieces.append(cur)
            cur = []
    if cur:
        pieces.append(cur)
    return " ".join("M" + " L".join(f"{_f(x)},{_f(y)}" for x, y in piece)
                    for piece in pieces if len(piece) > 1)


def _render_rp2(result: ScanResult) -> str:
    n = result.resolution
    width = 3 * PANEL + 4 * MARGIN + 170
    height = PANEL + 2 * MARGIN
    out = _header(width, height)
    cs = PANEL / n
    for k, chart in enumerate(CHARTS):
        x0 = MARGIN + k * (PANEL + MARGIN)
        y0 = MARGIN
        cells = result.chart_cells(chart)
        out.append(f'<g id="chart-{chart}">')
        out.append(f'<text x="{_f(x0)}" y="{_f(y0 - 10)}" font-family="sans-serif" '
                   f'font-size="13">chart {chart} = 1</text>')
        hatched = []
        for i in range(n):
            for j in range(n):
                c = cells.get((i, j))
                if c is None:
                    continue
                x = x0 + i * cs
                y = y0 + (n - 1 - j) * cs
                out.append(f'<rect class="cell" x="{_f(x)}" y="{_f(y)}" width="{_f(cs)}" '
                           f'height="{_f(cs)}" fill="{_color(c)}"/>')
                if c.status != "Stable":
                    hatched.append(f'<rect class="hatch" x="{_f(x)}" y="{_f(y)}" '
                                   f'width="{_f(cs)}" height="{_f(cs)}" fill="url(#hatch)"/>')
        out.extend(hatched)
        for kind in RP2_LOCI:
            color, dash = LOCUS_STYLE[kind]
            out.append(f'<path class="locus" id="{kind.value}-{chart}" '
                       f'd="{_locus_path(kind, chart, x0, y0)}" fill="none" stroke="{color}" '
                       f'stroke-width="{"2.5" if kind in (LocusKind.LQUARTER, LocusKind.DELTA) else "1.5"}" '
                       f'stroke-dasharray="{dash}"/>')
        out.append(f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(PANEL)}" height="{_f(PANEL)}" '
                   f'fill="none" stroke="#000000" stroke-width="1"/>')
        out.append("</g>")
    out += _legend(3 * PANEL + 4 * MARGIN - 10, MARGIN)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_rp1(result: ScanResult) -> str:
    n = result.resolution
    size = PANEL + 2 * MARGIN
    width = size + 170
    out = _header(width, size)
    cx = cy = size / 2
    r_out, r_in = PANEL / 2, PANEL / 2 - 40
    hatched = []
    out.append('<g id="circle">')
    for c in sorted(result.cells, key=lambda c: c.i):
        # the projective angle theta in [0, pi) is drawn as 2*theta
        a0 = 2 * math.pi * c.i / n
        a1 = 2 * math.pi * (c.i + 1) / n
        pts = [(cx + r * math.cos(a), cy - r * math.sin(a))
               for r, a in ((r_out, a0), (r_out, a1), (r_in, a1), (r_in, a0))]
        d = (f"M{_f(pts[0][0])},{_f(pts[0][1])} L{_f(pts[1][0])},{_f(pts[1][1])} "
             f"L{_f(pts[2][0])},{_f(pts[2][1])} L{_f(pts[3][0])},{_f(pts[3][1])} Z")
        out.append(f'<path class="cell" d="{d}" fill="{_color(c)}"/>')
        if c.status != "Stable":
            hatched.append(f'<path class="hatch" d="{d}" fill="url(#hatch)"/>')
    out.extend(hatched)
    angles = rp1_locus_angles()
    for kind in RP1_LOCI:
        a = 2 * angles[kind]
        color, _ = LOCUS_STYLE[kind]
        x1, y1 = cx + (r_in - 10) * math.cos(a), cy - (r_in - 10) * math.sin(a)
        x2, y2 = cx + (r_out + 10) * math.cos(a), cy - (r_out + 10) * math.sin(a)
        out.append(f'<path class="locus" id="{kind.value}" d="M{_f(x1)},{_f(y1)} '
                   f'L{_f(x2)},{_f(y2)}" fill="none" stroke="{color}" stroke-width="2"/>')
        tx, ty = cx + (r_in - 28) * math.cos(a), cy - (r_in - 28) * math.sin(a)
        out.append(f'<text x="{_f(tx)}" y="{_f(ty)}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="middle">{kind.value}</text>')
    out.append("</g>")
    out += _legend(size, MARGIN)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(result: ScanResult) -> str:
    """SVG 1.1 picture of a scan: cells coloured by count, non-Stable cells
    hatched, loci drawn on top."""
    return _render_rp1(result) if result.space == "rp1" else _render_rp2(result)


def dataset_jsonl(result: ScanResult) -> str:
    lines = [json.dumps(c.record(), separators=(",", ":")) for c in result.cells]
    return "\n".join(lines) + "\n"


def summary_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["region_id", "count", "cell_count"])
    for (reg, cnt), n in region_counts(result).items():
        w.writerow([reg, cnt, n])
    return buf.getvalue()


def load_dataset(text: str) -> ScanResult:
    """Rebuild a ScanResult from its JSON Lines dataset."""
    cells = []
    for line in text.splitlines():
        if not line.strip():
            continue
        r = json.loads(line)
        cells.append(Cell(r["chart"], r["i"], r["j"], tuple(r["lambda"]), r["count"],
                          r["status"], r["winding_defect"], r["nearest_locus"], r["distance"]))
    if not cells:
        raise ValueError("empty dataset")
    space = "rp1" if cells[0].chart == "rp1" else "rp2"
    resolution = len(cells) if space == "rp1" else max(c.i for c in cells) + 1
    return ScanResult(space, resolution, cells)


def write_outputs(result: ScanResult, prefix: str | Path) -> dict:
    """Write ``<prefix>.jsonl``, ``<prefix>.csv`` and ``<prefix>.svg``."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    paths = {"dataset": prefix.with_suffix(".jsonl"), "summary": prefix.with_suffix(".csv"),
             "svg": prefix.with_suffix(".svg")}
    paths["dataset"].write_text(dataset_jsonl(result))
    paths["summary"].write_text(summary_csv(result))
    paths["svg"].write_text(render_svg(result))
    return paths
