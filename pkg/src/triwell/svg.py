"""Static SVG diagrams of a well set in plane coordinates.

Drawn in rank-one frame coordinates (x, y) around U0 when the plane has a
rank-one frame: the axes are then the two rank-one lines through U0.  Planes
without rank-one directions fall back to an orthonormal basis at U1.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from . import sym2
from .errors import DomainError
from .hulls import PAIRS, HullStatus, Point, Segment, Triangle, WellSet, quasiconvex_hull
from .sym2 import CompatKind

WIDTH = 480
HEIGHT = 480
PAD = 0.2
GAMMA_SAMPLES = 256


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Chart:
    """Affine map from matrices to pixel coordinates."""

    def __init__(self, ws: WellSet):
        try:
            frame = ws.frame
        except DomainError:
            frame = None
        self.frame = frame
        if frame is not None:
            self.origin = ws.origin()
            self.basis = np.column_stack([frame.e_a.to_vec(), frame.e_n.to_vec()])
            self.labels = ("x (a-perp rank-one line)", "y (n-perp rank-one line)")
        else:
            u1, u2, u3 = ws.labeled
            q, _ = np.linalg.qr(np.column_stack([(u2 - u1).to_vec(), (u3 - u1).to_vec()]))
            self.origin = u1
            self.basis = q
            self.labels = ("e1", "e2")
        self.pinv = np.linalg.pinv(self.basis)
        pts = self.coords(sym2.stack(ws.labeled))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = max(float((hi - lo).max()), 1e-12)
        mid = 0.5 * (lo + hi)
        self.half = 0.5 * span * (1.0 + 2 * PAD)
        self.mid = mid

    def coords(self, comps: np.ndarray) -> np.ndarray:
        comps = np.atleast_2d(comps)
        o = self.origin
        vec = np.column_stack([comps[:, 0] - o.xx, comps[:, 1] - o.yy, sym2.SQRT2 * (comps[:, 2] - o.xy)])
        return vec @ self.pinv.T

    def px(self, xy: np.ndarray) -> np.ndarray:
        xy = np.atleast_2d(xy)
        s = WIDTH / (2 * self.half)
        return np.column_stack([(xy[:, 0] - self.mid[0]) * s + WIDTH / 2, HEIGHT / 2 - (xy[:, 1] - self.mid[1]) * s])

    def box(self) -> tuple:
        return self.mid[0] - self.half, self.mid[0] + self.half, self.mid[1] - self.half, self.mid[1] + self.half


def _points_attr(px: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in px)


def _clip_line(p: np.ndarray, d: np.ndarray, box: tuple) -> np.ndarray | None:
    """Segment of the line p + t d inside the box (Liang-Barsky)."""
    x0, x1, y0, y1 = box
    t_lo, t_hi = -math.inf, math.inf
    for pc, dc, lo, hi in ((p[0], d[0], x0, x1), (p[1], d[1], y0, y1)):
        if abs(dc) < 1e-15:
            if pc < lo or pc > hi:
                return None
            continue
        a, b = (lo - pc) / dc, (hi - pc) / dc
        t_lo, t_hi = max(t_lo, min(a, b)), min(t_hi, max(a, b))
    if t_lo >= t_hi:
        return None
    return np.array([p + t_lo * d, p + t_hi * d])


def _in_triangle(xy: np.ndarray, tri: np.ndarray, slack: float = 1e-9) -> np.ndarray:
    a, b, c = tri
    m = np.column_stack([b - a, c - a])
    w = np.linalg.solve(m, (xy - a).T).T
    return (w[:, 0] >= -slack) & (w[:, 1] >= -slack) & (w.sum(axis=1) <= 1 + slack)


def gamma_polylines(coeffs: Sequence[float], tri: np.ndarray, samples: int = GAMMA_SAMPLES) -> list:
    """Pieces of A xy + B x + D y + E = 0 inside a triangle, as polylines.

    With A != 0 the curve is the hyperbola (x - xc)(y - yc) = kappa; each branch
    is sampled geometrically in |x - xc|, which keeps points dense near the
    asymptotes.
    """
    a, b, d, e = (float(c) for c in coeffs)
    scale = max(abs(a), abs(b), abs(d), abs(e), 1e-300)
    lo, hi = tri.min(axis=0), tri.max(axis=0)
    runs = []
    if abs(a) <= 1e-12 * scale:
        # straight line B x + D y + E = 0
        if abs(b) < 1e-15 * scale and abs(d) < 1e-15 * scale:
            return []
        n = np.array([b, d]) / math.hypot(b, d)
        p0 = -e / math.hypot(b, d) * n
        seg = _clip_line(p0, np.array([-n[1], n[0]]), (lo[0], hi[0], lo[1], hi[1]))
        if seg is None:
            return []
        t = np.linspace(0.0, 1.0, samples)[:, None]
        candidates = [seg[0] + t * (seg[1] - seg[0])]
    else:
        xc, yc = -d / a, -b / a
        kappa = (b * d - a * e) / a**2
        candidates = []
        span = float((hi - lo).max())
        for sgn in (1.0, -1.0):
            s_max = max(abs(lo[0] - xc), abs(hi[0] - xc), 1e-300)
            if kappa != 0.0:
                s_min = max(abs(kappa) / max(abs(lo[1] - yc), abs(hi[1] - yc), 1e-300), 1e-12 * span)
                s = sgn * np.geomspace(min(s_min, s_max), s_max, samples)
                candidates.append(np.column_stack([xc + s, yc + kappa / s]))
            else:
                # degenerate hyperbola: the two lines x = xc and y = yc
                t = np.linspace(lo, hi, samples)
                candidates.append(np.column_stack([np.full(samples, xc), t[:, 1]]))
                candidates.append(np.column_stack([t[:, 0], np.full(samples, yc)]))
                break
    for pts in candidates:
        inside = _in_triangle(pts, tri)
        start = None
        for i, ok in enumerate(list(inside) + [False]):
            if ok and start is None:
                start = i
            elif not ok and start is not None:
                if i - start >= 2:
                    runs.append(pts[start:i])
                start = None
    return runs


def render_svg(wells: Sequence, tol: float | None = None) -> str:
    """SVG text for the wells, U0, the lamination hull and the outer bound curve."""
    ws = WellSet(list(wells), tol)
    ws.require_plane()
    res = quasiconvex_hull(ws)
    chart = _Chart(ws)
    labeled = ws.labeled
    wells_xy = chart.coords(sym2.stack(labeled))
    wells_px = chart.px(wells_xy)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(ws.wclass.kind.value)}, {escape(res.status.value)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]

    if chart.frame is not None and ws.u0 is not None:
        out.append('<g id="rank-one-lines" stroke="gray" stroke-width="1">')
        o = chart.coords(ws.u0.components())[0]
        for d in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
            seg = _clip_line(o, d, chart.box())
            if seg is not None:
                p = chart.px(seg)
                out.append(f'<line x1="{_fmt(p[0, 0])}" y1="{_fmt(p[0, 1])}" x2="{_fmt(p[1, 0])}" y2="{_fmt(p[1, 1])}"/>')
        out.append("</g>")

    out.append('<g id="lamination-hull" fill="#4a78c8" fill-opacity="0.45" stroke="#1f4fa0" stroke-width="2">')
    for piece in res.inner.pieces:
        p = chart.px(chart.coords(sym2.stack(piece.vertices)))
        if isinstance(piece, Triangle):
            out.append(f'<polygon points="{_points_attr(p)}"/>')
        elif isinstance(piece, Segment):
            out.append(f'<polyline points="{_points_attr(p)}" fill="none" stroke-width="4"/>')
        elif isinstance(piece, Point):
            out.append(f'<circle cx="{_fmt(p[0, 0])}" cy="{_fmt(p[0, 1])}" r="6"/>')
    out.append("</g>")

    out.append('<g id="convex-hull" fill="none" stroke="black" stroke-width="1.5">')
    for i, j in PAIRS:
        kind = sym2.compat(labeled[i], labeled[j], tol).kind
        dash = ' stroke-dasharray="6,4"' if kind is CompatKind.INCOMPATIBLE else ""
        a, b = wells_px[i], wells_px[j]
        out.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" y2="{_fmt(b[1])}"{dash}/>')
    out.append("</g>")

    if res.status is HullStatus.BOUND_ONLY:
        # type one/two planes always carry the rank-one frame, and the chart origin is U0
        coeffs = res.bound.h_coeffs
        out.append('<g id="gamma" fill="none" stroke="#c03030" stroke-width="2">')
        for run in gamma_polylines(coeffs, wells_xy):
            out.append(f'<polyline points="{_points_attr(chart.px(run))}"/>')
        out.append("</g>")

    out.append('<g id="wells" fill="black">')
    for k, p in enumerate(wells_px, start=1):
        out.append(f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="4"/>')
        out.append(f'<text x="{_fmt(p[0] + 7)}" y="{_fmt(p[1] - 7)}" font-size="13" font-family="sans-serif">U{k}</text>')
    out.append("</g>")
    if ws.u0 is not None:
        p = chart.px(chart.coords(ws.u0.components()))[0]
        out.append('<g id="u0" fill="red">')
        out.append(f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="4"/>')
        out.append(f'<text x="{_fmt(p[0] + 7)}" y="{_fmt(p[1] + 15)}" font-size="13" font-family="sans-serif">U0</text>')
        out.append("</g>")
    out.append(
        f'<text x="8" y="{HEIGHT - 8}" font-size="11" font-family="sans-serif" fill="gray">'
        f"{escape(chart.labels[0])}; {escape(chart.labels[1])}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"

