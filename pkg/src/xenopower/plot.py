"""Deterministic SVG rendering of power curves.

One polyline per line-count n, power fraction against animals per arm m,
with a dashed horizontal reference at the target power. Identical inputs
produce byte-identical documents: fixed canvas, fixed palette, fixed
number formatting, no timestamps.
"""

from __future__ import annotations

from typing import Tuple

from .types import PowerTable, ValidationError

__all__ = ["render_power_plot"]

_WIDTH, _HEIGHT = 720, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 120, 24, 52

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_power_plot(
    table: PowerTable,
    target_power: float,
    y_range: Tuple[float, float] = (0.0, 1.0),
) -> str:
    """Render the table's power curves as an SVG document string."""
    if not table.rows:
        raise ValidationError("cannot plot an empty table")
    lo, hi = float(y_range[0]), float(y_range[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise ValidationError(f"y_range must satisfy 0 <= lo < hi <= 1, got {y_range}")

    ns = sorted({r.n for r in table.rows})
    ms = sorted({r.m for r in table.rows})
    x0, x1 = _MARGIN_L, _WIDTH - _MARGIN_R
    y0, y1 = _HEIGHT - _MARGIN_B, _MARGIN_T

    def xpos(m: int) -> float:
        if len(ms) == 1:
            return (x0 + x1) / 2.0
        return x0 + (x1 - x0) * (m - ms[0]) / (ms[-1] - ms[0])

    def ypos(frac: float) -> float:
        clipped = min(max(frac, lo), hi)
        return y0 + (y1 - y0) * (clipped - lo) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]

    for m in ms:
        px = xpos(m)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{y0 + 20}" font-family="sans-serif" font-size="12" '
            f'text-anchor="middle">{m}</text>'
        )
    n_ticks = 6
    for k in range(n_ticks):
        frac = lo + (hi - lo) * k / (n_ticks - 1)
        py = ypos(frac)
        parts.append(
            f'<line x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{x0 - 9}" y="{_fmt(py + 4)}" font-family="sans-serif" font-size="12" '
            f'text-anchor="end">{_fmt(frac)}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) // 2}" y="{_HEIGHT - 12}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle">animals per arm per line (m)</text>'
    )
    parts.append(
        f'<text x="18" y="{(y0 + y1) // 2}" font-family="sans-serif" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 18 {(y0 + y1) // 2})">power</text>'
    )

    if lo <= target_power <= hi:
        ty = ypos(target_power)
        parts.append(
            f'<line x1="{x0}" y1="{_fmt(ty)}" x2="{x1}" y2="{_fmt(ty)}" '
            'stroke="#555555" stroke-width="1" stroke-dasharray="6,4"/>'
        )

    by_n = {n: sorted((r.m, r.power) for r in table.rows if r.n == n) for n in ns}
    for idx, n in enumerate(ns):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = [(xpos(m), ypos(p / 100.0)) for m, p in by_n[n]]
        if len(pts) > 1:
            path = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)
            parts.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        for px, py in pts:
            parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3" fill="{color}"/>')

    legend_x = x1 + 12
    for idx, n in enumerate(ns):
        color = _PALETTE[idx % len(_PALETTE)]
        ly = y1 + 10 + idx * 18
        parts.append(
            f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 22}" y2="{ly}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{legend_x + 28}" y="{ly + 4}" font-family="sans-serif" '
            f'font-size="12">n={n}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
