"""Minimal polyline SVG plots (800x400, axes, legend); no plotting dependency."""

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 400
MARGIN = 50
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


class _Frame:
    def __init__(self, x, ys):
        self.x0, self.x1 = float(np.min(x)), float(np.max(x))
        lo = min(float(np.min(y)) for y in ys)
        hi = max(float(np.max(y)) for y in ys)
        if hi == lo:
            lo, hi = lo - 1.0, hi + 1.0
        self.y0, self.y1 = lo, hi
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0

    def px(self, x):
        return MARGIN + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def py(self, y):
        return HEIGHT - MARGIN - (np.asarray(y) - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)


def _axes(f, title, xlabel, ylabel):
    b = HEIGHT - MARGIN
    return [
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{b}" x2="{WIDTH - MARGIN}" y2="{b}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{b}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2}" font-size="12" transform="rotate(-90 14 {HEIGHT / 2})" '
        f'text-anchor="middle">{escape(ylabel)}</text>',
        f'<text x="{MARGIN - 4}" y="{MARGIN + 4}" text-anchor="end" font-size="10">{f.y1:.3g}</text>',
        f'<text x="{MARGIN - 4}" y="{b}" text-anchor="end" font-size="10">{f.y0:.3g}</text>',
        f'<text x="{MARGIN}" y="{b + 14}" text-anchor="middle" font-size="10">{f.x0:.3g}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{b + 14}" text-anchor="middle" font-size="10">{f.x1:.3g}</text>',
    ]


def line_plot(path, x, series, title="", xlabel="t", ylabel="y",
              shade=(), markers=()):
    """
    Write an SVG with one polyline per series.

    series : dict label -> y values
    shade : iterable of (x_from, x_to) spans drawn as grey bands
    markers : iterable of (x, y, color) points
    """
    ys = list(series.values())
    f = _Frame(x, ys)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for a, b in shade:
        xa, xb = f.px(a), f.px(b)
        out.append(f'<rect x="{xa:.2f}" y="{MARGIN}" width="{max(xb - xa, 1):.2f}" '
                   f'height="{HEIGHT - 2 * MARGIN}" fill="#000" fill-opacity="0.08"/>')
    out += _axes(f, title, xlabel, ylabel)
    for i, (label, y) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px:.2f},{py:.2f}" for px, py in zip(f.px(x), f.py(y)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        ly = MARGIN + 14 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 120}" y1="{ly}" x2="{WIDTH - MARGIN - 100}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 95}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    for mx, my, color in markers:
        out.append(f'<circle cx="{float(f.px(mx)):.2f}" cy="{float(f.py(my)):.2f}" r="4" fill="{color}"/>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
