"""Minimal SVG emitters: cell heatmaps and (log-log) trend plots.

Hand-rolled so that artifact generation has no plotting dependency and the
output bytes are a pure function of the data.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

from .mesh import GridFunction

__all__ = ["heatmap_svg", "trend_svg"]

# Three-anchor colormap (dark violet -> teal -> yellow).
_ANCHORS = ((68, 1, 84), (33, 145, 140), (253, 231, 37))


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    if t < 0.5:
        a, b, s = _ANCHORS[0], _ANCHORS[1], t * 2.0
    else:
        a, b, s = _ANCHORS[1], _ANCHORS[2], t * 2.0 - 1.0
    rgb = tuple(round(x + (y - x) * s) for x, y in zip(a, b))
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def heatmap_svg(u: GridFunction, title: str = "", size: int = 480) -> str:
    """Render a grid function as an n x n colored-cell heatmap."""
    n = u.mesh.n
    vals = u.values
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo if hi > lo else 1.0
    cell = size / n
    margin = 40
    width, height = size + 2 * margin, size + 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{margin}" y="{margin - 14}" font-family="monospace" font-size="13">'
        f"{title} [min={lo:.6g}, max={hi:.6g}]</text>",
    ]
    for ix in range(n):
        for iy in range(n):
            t = (vals[ix, iy] - lo) / span
            # SVG y axis points down; flip so the domain's y increases upward.
            x = margin + ix * cell
            y = margin + (n - 1 - iy) * cell
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell + 0.35:.2f}" '
                f'height="{cell + 0.35:.2f}" fill="{_color(t)}"/>'
            )
    parts.append(
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        lo_e, hi_e = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        return [10.0**e for e in range(lo_e, hi_e + 1)]
    raw = np.linspace(lo, hi, 5)
    return [float(x) for x in raw]


def trend_svg(
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str = "",
    loglog: bool = False,
    size: tuple[int, int] = (560, 400),
) -> str:
    """Plot one or more series against x with markers; optionally log-log.

    Nonpositive values cannot appear on logarithmic axes; a tiny floor is
    substituted so degenerate (exact-zero) trends still render.
    """
    width, height = size
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    xs = np.asarray(x, dtype=float)
    all_y = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    floor = 1e-300
    if loglog:
        xs = np.maximum(xs, floor)
        all_y = np.maximum(all_y, floor)

    def tx(v):
        return math.log10(v) if loglog else v

    x_lo, x_hi = min(map(tx, xs)), max(map(tx, xs))
    y_lo, y_hi = tx(float(all_y.min())), tx(float(all_y.max()))
    if x_hi == x_lo:
        x_hi += 1.0
    if y_hi == y_lo:
        y_hi += 1.0

    def px(v):
        return ml + (tx(v) - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return mt + ph - (tx(v) - y_lo) / (y_hi - y_lo) * ph

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="{mt - 16}" font-family="monospace" font-size="13">{title}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for tick in _ticks(10.0**x_lo if loglog else x_lo, 10.0**x_hi if loglog else x_hi, loglog):
        if not (x_lo - 1e-9 <= tx(tick) <= x_hi + 1e-9):
            continue
        xp = px(tick)
        parts.append(f'<line x1="{xp:.1f}" y1="{mt + ph}" x2="{xp:.1f}" y2="{mt + ph + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{xp:.1f}" y="{mt + ph + 18}" font-family="monospace" font-size="10" '
            f'text-anchor="middle">{tick:.4g}</text>'
        )
    for tick in _ticks(10.0**y_lo if loglog else y_lo, 10.0**y_hi if loglog else y_hi, loglog):
        if not (y_lo - 1e-9 <= tx(tick) <= y_hi + 1e-9):
            continue
        yp = py(tick)
        parts.append(f'<line x1="{ml - 5}" y1="{yp:.1f}" x2="{ml}" y2="{yp:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{ml - 8}" y="{yp + 3:.1f}" font-family="monospace" font-size="10" '
            f'text-anchor="end">{tick:.3g}</text>'
        )
    for i, (label, ys) in enumerate(series.items()):
        color = colors[i % len(colors)]
        ys = np.maximum(np.asarray(ys, dtype=float), floor) if loglog else np.asarray(ys, dtype=float)
        pts = " ".join(f"{px(a):.1f},{py(b):.1f}" for a, b in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in zip(xs, ys):
            parts.append(f'<circle cx="{px(a):.1f}" cy="{py(b):.1f}" r="3" fill="{color}"/>')
        parts.append(
            f'<text x="{ml + 8}" y="{mt + 14 + 13 * i}" font-family="monospace" '
            f'font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
