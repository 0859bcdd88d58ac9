"""Accuracy-versus-FLOPs scatter plots written as plain SVG.

Candidates are drawn as dots and Pareto-optimal rows as stars, one marker per
row, on a log10 FLOPs axis.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 50, 70


def _star(cx: float, cy: float, r: float = 9.0) -> str:
    pts = []
    for k in range(10):
        rad = r if k % 2 == 0 else r * 0.45
        a = -math.pi / 2 + k * math.pi / 5
        pts.append(f"{cx + rad * math.cos(a):.2f},{cy + rad * math.sin(a):.2f}")
    return " ".join(pts)


def scatter_svg(points: list[tuple[float, float, bool]], title: str, xlabel: str) -> str:
    """Render ``(flops, accuracy, is_pareto)`` triples."""
    logs = [math.log10(max(f, 1.0)) for f, _, _ in points] or [0.0, 1.0]
    lo, hi = math.floor(min(logs)), math.ceil(max(logs))
    if hi == lo:
        hi = lo + 1
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v: float) -> float:
        return MARGIN_L + (v - lo) / (hi - lo) * pw

    def sy(acc: float) -> float:
        return MARGIN_T + (1.0 - acc) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<g class="axes" stroke="black" fill="none">'
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" y2="{MARGIN_T + ph}"/>'
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + ph}"/></g>',
    ]
    ticks = ['<g class="ticks">']
    for e in range(lo, hi + 1):
        x = sx(e)
        ticks.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 6}" stroke="black"/>'
            f'<text x="{x:.2f}" y="{MARGIN_T + ph + 22}" text-anchor="middle">10^{e}</text>'
        )
    for k in range(6):
        acc = k / 5
        y = sy(acc)
        ticks.append(
            f'<line x1="{MARGIN_L - 6}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>'
            f'<text x="{MARGIN_L - 10}" y="{y + 4:.2f}" text-anchor="end">{acc:.1f}</text>'
        )
    ticks.append("</g>")
    out += ticks
    out.append(
        f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 20}" text-anchor="middle">{escape(xlabel)} (log scale)</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {MARGIN_T + ph / 2})">Accuracy</text>'
    )
    out.append('<g class="markers">')
    # stars on top of dots
    for (f, acc, par), v in sorted(zip(points, logs), key=lambda t: t[0][2]):
        x, y = sx(v), sy(acc)
        if par:
            out.append(f'<polygon class="pareto" points="{_star(x, y)}" fill="red" stroke="darkred"/>')
        else:
            out.append(f'<circle class="candidate" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="steelblue" fill-opacity="0.6"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


VIEWS = (
    ("classical_flops", "Classical FLOPs"),
    ("quantum_flops", "Quantum FLOPs"),
    ("total_flops", "Total FLOPs"),
)


def write_scatters(rows, out_dir, dataset_name: str = "") -> list:
    """Write one scatter per FLOPs view; returns the written paths."""
    out_dir = Path(out_dir)
    paths = []
    for attr, label in VIEWS:
        pts = [(getattr(r, attr), r.accuracy, r.is_pareto) for r in rows]
        title = f"{dataset_name}: accuracy vs {label.lower()}" if dataset_name else f"Accuracy vs {label.lower()}"
        path = out_dir / f"scatter_{attr.replace('_flops', '')}.svg"
        path.write_text(scatter_svg(pts, title, label), encoding="utf-8")
        paths.append(path)
    return paths
