"""Compare grid fields against closed-form regions up to a boundary band.

Distances are Euclidean in the (theta2, theta3) chart of the triangle, where
grid spacing is 1/N along both axes.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .. import plane as pg
from ..hulls import CurvedPatch, HullRegion, Segment, Triangle
from ..sym2 import Sym2
from .grid import BaryGrid


def _chart(u: Sym2, wells: Sequence[Sym2]) -> np.ndarray:
    return pg.barycentric(u, wells)[1:]


def _seg_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    dd = float(d @ d)
    t = np.zeros(len(p)) if dd == 0.0 else np.clip((p - a) @ d / dd, 0.0, 1.0)
    return np.linalg.norm(p - a - t[:, None] * d, axis=1)


def _in_triangle(p: np.ndarray, a, b, c) -> np.ndarray:
    m = np.column_stack([b - a, c - a])
    if abs(np.linalg.det(m)) < 1e-14:
        return np.zeros(len(p), dtype=bool)
    w = np.linalg.solve(m, (p - a).T).T
    return (w[:, 0] >= -1e-12) & (w[:, 1] >= -1e-12) & (w.sum(axis=1) <= 1 + 1e-12)


def _edges(region: HullRegion, wells) -> tuple:
    """Chart-space pieces and the boundary edges of their union (shared triangle edges dropped)."""
    solids, lower = [], []
    for piece in region.pieces:
        verts = [_chart(v, wells) for v in piece.vertices]
        if isinstance(piece, Triangle) and not piece.is_degenerate():
            solids.append(verts)
        elif isinstance(piece, Triangle):
            lower.extend([(verts[0], verts[1]), (verts[0], verts[2]), (verts[1], verts[2])])
        elif isinstance(piece, Segment):
            lower.append((verts[0], verts[1]))
        else:
            lower.append((verts[0], verts[0]))
    edges = []
    for t in solids:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            shared = sum(
                1
                for s in solids
                for f in ((s[0], s[1]), (s[1], s[2]), (s[0], s[2]))
                if (np.allclose(e[0], f[0]) and np.allclose(e[1], f[1]))
                or (np.allclose(e[0], f[1]) and np.allclose(e[1], f[0]))
            )
            if shared == 1:
                edges.append(e)
    return solids, lower, edges


def polygonal_distances(region: HullRegion, wells, pts: np.ndarray) -> tuple:
    """(distance to the region, distance to its complement) for chart points."""
    solids, lower, edges = _edges(region, wells)
    inside = np.zeros(len(pts), dtype=bool)
    for t in solids:
        inside |= _in_triangle(pts, *t)
    d_lower = np.full(len(pts), np.inf)
    for a, b in lower:
        d_lower = np.minimum(d_lower, _seg_dist(pts, a, b))
    d_edges = np.full(len(pts), np.inf)
    for a, b in edges:
        d_edges = np.minimum(d_edges, _seg_dist(pts, a, b))
    to_region = np.where(inside, 0.0, np.minimum(d_lower, d_edges))
    to_complement = np.where(inside, d_edges, 0.0)
    return to_region, to_complement


def _chart_to_comps(pts: np.ndarray, wells) -> np.ndarray:
    theta = np.column_stack([1.0 - pts.sum(axis=1), pts])
    return theta @ np.array([w.components() for w in wells])


def near_boundary_sampled(region: HullRegion, wells, pts: np.ndarray, member: np.ndarray, radius: float) -> np.ndarray:
    """True where membership changes somewhere in the closed disk of the given radius."""
    rings = [0.25, 0.5, 0.75, 1.0]
    angles = np.linspace(0.0, 2 * math.pi, 48, endpoint=False)
    offs = np.array([[r * radius * math.cos(a), r * radius * math.sin(a)] for r in rings for a in angles])
    near = np.zeros(len(pts), dtype=bool)
    for off in offs:
        q = pts + off
        near |= region.contains_array(_chart_to_comps(q, wells)) != member
    return near


def band_compare(
    region: HullRegion, wells: Sequence[Sym2], grid: BaryGrid, oracle: np.ndarray, width: float
) -> dict:
    """Mismatches between oracle marks and closed-form membership, and how many lie outside the band.

    ``wells`` must be in the labeling the grid was built with.
    """
    pts = grid.plane_coords()
    member = region.contains_array(grid.matrices(wells))
    diff = member != oracle
    idx = np.where(diff)[0]
    if any(isinstance(p, CurvedPatch) for p in region.pieces):
        ok = near_boundary_sampled(region, wells, pts[idx], member[idx], width)
        dist = np.where(ok, 0.0, np.inf)
    else:
        to_region, to_comp = polygonal_distances(region, wells, pts[idx])
        dist = np.where(member[idx], to_comp, to_region)
        ok = dist <= width + 1e-12
    return {
        "mismatches": int(diff.sum()),
        "outside_band": int((~ok).sum()),
        "max_distance": float(dist.max()) if len(dist) else 0.0,
        "missing": int((member & ~oracle).sum()),
        "extra": int((~member & oracle).sum()),
        "width": float(width),
        "passed": bool(ok.all()),
    }


def inclusion_compare(
    inner: np.ndarray, outer: np.ndarray, regions: Sequence[HullRegion], wells, grid: BaryGrid, width: float
) -> dict:
    """Check inner => outer on the grid, excusing points within ``width`` of a region boundary."""
    bad = np.where(inner & ~outer)[0]
    pts = grid.plane_coords()[bad]
    excused = np.zeros(len(bad), dtype=bool)
    for region in regions:
        member = region.contains_array(_chart_to_comps(pts, wells))
        if any(isinstance(p, CurvedPatch) for p in region.pieces):
            excused |= near_boundary_sampled(region, wells, pts, member, width)
        else:
            to_region, to_comp = polygonal_distances(region, wells, pts)
            excused |= np.where(member, to_comp, to_region) <= width + 1e-12
    return {"violations": int(len(bad)), "outside_band": int((~excused).sum()), "width": float(width), "passed": bool(excused.all())}
