"""Minimal deterministic SVG output: line plots, domains with cuts, point clouds.

All coordinates are written with a fixed number of decimals so the bytes
depend only on the data.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98", "#d35400", "#555555")
DASHES = {"solid": None, "dashdot": "8,3,2,3", "dashed": "6,4", "dotted": "2,3"}


def _f(x) -> str:
    s = f"{float(x):.3f}"
    return "0.000" if s == "-0.000" else s


def _nice_ticks(lo, hi, n=5):
    if not np.isfinite(lo) or not np.isfinite(hi):
        return []
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def _tick_label(v) -> str:
    if v == 0:
        return "0"
    a = abs(v)
    if a >= 1e-3 and a < 1e4:
        return f"{v:.4g}"
    return f"{v:.1e}"


class Figure:
    """Accumulates SVG elements; ``to_string`` is byte-deterministic."""

    def __init__(self, width=640, height=420):
        self.width = width
        self.height = height
        self.items = []

    def add(self, element: str):
        self.items.append(element)

    def polyline(self, pts, color="#000000", width=1.5, dash="solid", closed=False):
        pts = np.asarray(pts, dtype=float)
        if len(pts) == 0:
            return
        d = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        tag = "polygon" if closed else "polyline"
        style = f'fill="none" stroke="{color}" stroke-width="{width}"'
        if DASHES.get(dash):
            style += f' stroke-dasharray="{DASHES[dash]}"'
        self.add(f'<{tag} points="{d}" {style}/>')

    def circle(self, x, y, r, color):
        self.add(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{color}"/>')

    def text(self, x, y, s, size=12, anchor="middle"):
        self.add(f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" font-family="sans-serif">{escape(str(s))}</text>')

    def to_string(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        body = [f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>'] + self.items
        return "\n".join([head] + body + ["</svg>"]) + "\n"

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_string())


def line_plot(series, title="", xlabel="", ylabel="", width=640, height=420, logy=False) -> Figure:
    """``series``: list of ``(label, xs, ys, style)`` with style in ``DASHES``."""
    fig = Figure(width, height)
    ml, mr, mt, mb = 70, 20, 40, 50
    xs_all = np.concatenate([np.asarray(s[1], float) for s in series]) if series else np.zeros(1)
    ys_all = np.concatenate([np.asarray(s[2], float) for s in series]) if series else np.zeros(1)
    if logy:
        ys_all = ys_all[ys_all > 0]
        ys_all = np.log10(ys_all) if len(ys_all) else np.zeros(1)
    ys_all = ys_all[np.isfinite(ys_all)]
    if len(ys_all) == 0:
        ys_all = np.zeros(1)
    x0, x1 = float(np.min(xs_all)), float(np.max(xs_all))
    y0, y1 = float(np.min(ys_all)), float(np.max(ys_all))
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def X(v):
        return ml + (np.asarray(v, float) - x0) / (x1 - x0) * (width - ml - mr)

    def Y(v):
        v = np.asarray(v, float)
        if logy:
            v = np.log10(np.where(v > 0, v, np.nan))
        return height - mb - (v - y0) / (y1 - y0) * (height - mt - mb)

    fig.polyline([(ml, height - mb), (width - mr, height - mb)], "#000000", 1)
    fig.polyline([(ml, height - mb), (ml, mt)], "#000000", 1)
    for t in _nice_ticks(x0, x1):
        fig.polyline([(X(t), height - mb), (X(t), height - mb + 4)], "#000000", 1)
        fig.text(X(t), height - mb + 18, _tick_label(t), 11)
    for t in _nice_ticks(y0, y1):
        yy = height - mb - (t - y0) / (y1 - y0) * (height - mt - mb)
        fig.polyline([(ml - 4, yy), (ml, yy)], "#000000", 1)
        fig.text(ml - 6, yy + 4, _tick_label(10**t if logy else t), 11, "end")
    for k, (label, xs, ys, style) in enumerate(series):
        xs = np.asarray(xs, float)
        ys = np.asarray(ys, float)
        ok = np.isfinite(ys) & ((ys > 0) if logy else True)
        pts = np.stack([X(xs[ok]), Y(ys[ok])], axis=1) if ok.any() else np.zeros((0, 2))
        fig.polyline(pts, COLORS[k % len(COLORS)], 2, style)
        fig.polyline([(width - mr - 150, mt + 14 + 16 * k), (width - mr - 120, mt + 14 + 16 * k)], COLORS[k % len(COLORS)], 2, style)
        fig.text(width - mr - 115, mt + 18 + 16 * k, label, 11, "start")
    fig.text(width / 2, 22, title, 14)
    fig.text(width / 2, height - 12, xlabel, 12)
    fig.add(f'<text x="16" y="{_f(height / 2)}" font-size="12" text-anchor="middle" font-family="sans-serif" '
            f'transform="rotate(-90 16 {_f(height / 2)})">{escape(ylabel)}</text>')
    return fig


class _Frame:
    def __init__(self, lo, hi, box, margin=20):
        self.lo = np.asarray(lo, float)
        span = np.asarray(hi, float) - self.lo
        bx, by, bw, bh = box
        self.s = min((bw - 2 * margin) / max(span[0], 1e-12), (bh - 2 * margin) / max(span[1], 1e-12))
        self.ox = bx + margin + ((bw - 2 * margin) - self.s * span[0]) / 2
        self.oy = by + bh - margin - ((bh - 2 * margin) - self.s * span[1]) / 2

    def __call__(self, pts):
        pts = np.asarray(pts, float)
        return np.stack([self.ox + (pts[:, 0] - self.lo[0]) * self.s, self.oy - (pts[:, 1] - self.lo[1]) * self.s], axis=1)


def _curve_pts(curve, n=64):
    return np.stack(curve.point(np.linspace(0.0, 1.0, n)), axis=-1)


def domain_figure(loop, cuts=(), title="", width=640, height=420, box=None, fig=None) -> Figure:
    """Boundary ``loop`` (curves) with ``cuts`` = list of ``(curve, style, label)``."""
    fig = fig or Figure(width, height)
    pts = np.concatenate([_curve_pts(c) for c in loop])
    frame = _Frame(pts.min(axis=0), pts.max(axis=0), box or (0, 30, width, height - 30))
    fig.polyline(frame(pts), "#000000", 1.5, closed=True)
    for k, (curve, style, label) in enumerate(cuts):
        color = COLORS[k % len(COLORS)]
        fig.polyline(frame(_curve_pts(curve)), color, 2, style)
        if label and box is None:
            fig.polyline([(width - 170, 40 + 16 * k), (width - 140, 40 + 16 * k)], color, 2, style)
            fig.text(width - 135, 44 + 16 * k, label, 11, "start")
    if title:
        bx = box[0] + box[2] / 2 if box else width / 2
        by = box[1] + 14 if box else 20
        fig.text(bx, by, title, 12 if box else 14)
    return fig


def filmstrip(frames, title="", cell=220) -> Figure:
    """Row of domains; ``frames`` is a list of ``(loop, cut_curve, caption)``."""
    n = max(1, len(frames))
    fig = Figure(cell * n, cell + 40)
    for k, (loop, cut, caption) in enumerate(frames):
        cuts = [(cut, "solid", "")] if cut is not None else []
        domain_figure(loop, cuts, caption, box=(k * cell, 30, cell, cell), fig=fig)
    if title:
        fig.text(fig.width / 2, 18, title, 14)
    return fig


def scatter_partition(points, sides, title="", width=640, height=360) -> Figure:
    pts = np.asarray(points, float)
    fig = Figure(width, height)
    frame = _Frame(pts.min(axis=0), pts.max(axis=0), (0, 30, width, height - 30))
    P = frame(pts)
    for (x, y), s in zip(P, sides):
        fig.circle(x, y, 1.6, COLORS[0] if s > 0 else COLORS[1])
    if title:
        fig.text(width / 2, 20, title, 14)
    return fig
