"""Closed-form hulls of a three-well set.

Labels follow the usual convention after permutation: in a type one set U1
is incompatible with both other wells; in a type two set U2 and U3 form the
only incompatible pair.  ``V_i = U_i - U0`` are the wells centered at the
rank-one intersection point U0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import plane as pg
from . import sym2
from .errors import DegeneratePlane, RankOnePresent, WrongClass
from .sym2 import CompatKind, Sym2

PAIRS = ((0, 1), (0, 2), (1, 2))


class WellKind(str, enum.Enum):
    ALL_COMPATIBLE = "all_compatible"
    ALL_INCOMPATIBLE = "all_incompatible"
    TYPE_ONE = "type_one"
    TYPE_TWO = "type_two"
    DEGENERATE_SPAN = "degenerate_span"


@dataclass(frozen=True)
class WellClass:
    kind: WellKind
    perm: tuple  # 0-based, perm[i] is the original index of U_{i+1}
    rank_one_pairs: tuple  # original 0-based indices
    dets: tuple  # det(U1-U2), det(U1-U3), det(U2-U3) in permuted labels
    span_dim: int

    @property
    def strict(self) -> bool:
        return not self.rank_one_pairs


def classify(wells: Sequence[Sym2], tol: float | None = None) -> WellClass:
    wells = list(wells)
    span = pg.affine_plane(wells).span_dim
    scale = pg.well_scale(wells)
    kinds = {p: sym2.compat(wells[p[0]], wells[p[1]], tol).kind for p in PAIRS}
    rank_one = tuple(p for p in PAIRS if kinds[p] is CompatKind.RANK_ONE)
    bad = [p for p in PAIRS if kinds[p] is CompatKind.INCOMPATIBLE]
    coincident = any((wells[i] - wells[j]).norm() <= 1e-12 * max(1.0, scale) for i, j in PAIRS)

    if span < 2 or coincident:
        kind, perm = WellKind.DEGENERATE_SPAN, (0, 1, 2)
    elif len(bad) == 0:
        kind, perm = WellKind.ALL_COMPATIBLE, (0, 1, 2)
    elif len(bad) == 3:
        kind, perm = WellKind.ALL_INCOMPATIBLE, (0, 1, 2)
    elif len(bad) == 2:
        (common,) = set(bad[0]) & set(bad[1])
        kind, perm = WellKind.TYPE_ONE, (common, *[i for i in range(3) if i != common])
    else:
        (lone,) = {0, 1, 2} - set(bad[0])
        kind, perm = WellKind.TYPE_TWO, (lone, *bad[0])
    u = [wells[i] for i in perm]
    dets = (sym2.det(u[0] - u[1]), sym2.det(u[0] - u[2]), sym2.det(u[1] - u[2]))
    return WellClass(kind, perm, rank_one, dets, span)


# -- regions ---------------------------------------------------------------

def _vecs(c: np.ndarray) -> np.ndarray:
    c = np.atleast_2d(np.asarray(c, dtype=float))
    return np.column_stack([c[:, 0], c[:, 1], sym2.SQRT2 * c[:, 2]])


def _segment_dist(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return np.linalg.norm(x - a, axis=1)
    t = np.clip((x - a) @ d / dd, 0.0, 1.0)
    return np.linalg.norm(x - a - t[:, None] * d, axis=1)


@dataclass(frozen=True)
class Point:
    p: Sym2

    @property
    def vertices(self) -> tuple:
        return (self.p,)

    def contains_array(self, c: np.ndarray, atol: float) -> np.ndarray:
        return np.linalg.norm(_vecs(c) - self.p.to_vec(), axis=1) <= atol


@dataclass(frozen=True)
class Segment:
    a: Sym2
    b: Sym2

    @property
    def vertices(self) -> tuple:
        return (self.a, self.b)

    def contains_array(self, c: np.ndarray, atol: float) -> np.ndarray:
        return _segment_dist(_vecs(c), self.a.to_vec(), self.b.to_vec()) <= atol


@dataclass(frozen=True)
class Triangle:
    a: Sym2
    b: Sym2
    c: Sym2

    @property
    def vertices(self) -> tuple:
        return (self.a, self.b, self.c)

    def is_degenerate(self) -> bool:
        m = np.column_stack([(self.b - self.a).to_vec(), (self.c - self.a).to_vec()])
        sv = np.linalg.svd(m, compute_uv=False)
        return sv[0] == 0.0 or sv[1] <= 1e-12 * sv[0]

    def contains_array(self, c: np.ndarray, atol: float) -> np.ndarray:
        x = _vecs(c)
        va, vb, vc = (v.to_vec() for v in self.vertices)
        if self.is_degenerate():
            return np.minimum.reduce(
                [_segment_dist(x, va, vb), _segment_dist(x, va, vc), _segment_dist(x, vb, vc)]
            ) <= atol
        basis = np.column_stack([vb - va, vc - va])
        coef = (x - va) @ np.linalg.pinv(basis).T
        resid = np.linalg.norm(x - va - coef @ basis.T, axis=1)
        # barycentric slack measured in distance units
        slack = atol / max(np.linalg.norm(vb - va), np.linalg.norm(vc - va), np.linalg.norm(vc - vb))
        lam = np.column_stack([1.0 - coef.sum(axis=1), coef])
        return (resid <= atol) & np.all(lam >= -slack, axis=1)


@dataclass(frozen=True)
class HbarForm:
    """ħ(V) = <C, V - V2> det V1 - <C, V1 - V2> det V, with V = U - U0."""

    c: Sym2
    u0: Sym2
    v1: Sym2
    v2: Sym2

    def __call__(self, u: Sym2) -> float:
        return hbar(u - self.u0, self.v1, self.v2, self.c)

    def eval_array(self, comps: np.ndarray) -> np.ndarray:
        v = np.atleast_2d(comps) - self.u0.components()
        return (sym2.inner_array(v, self.c) - sym2.inner(self.c, self.v2)) * sym2.det(self.v1) - sym2.inner(
            self.c, self.v1 - self.v2
        ) * sym2.det_array(v)


@dataclass(frozen=True)
class CurvedPatch:
    """{U in the triangle : ħ(U - U0) >= 0}, closed."""

    triangle: Triangle
    h: HbarForm
    h_scale: float

    @property
    def vertices(self) -> tuple:
        return self.triangle.vertices

    def contains_array(self, c: np.ndarray, atol: float, htol: float | None = None) -> np.ndarray:
        htol = 1e-9 * self.h_scale if htol is None else htol
        return self.triangle.contains_array(c, atol) & (self.h.eval_array(c) >= -htol)


@dataclass(frozen=True)
class HullRegion:
    pieces: tuple
    scale: float = 1.0

    def vertices(self) -> list:
        out: list = []
        for piece in self.pieces:
            for v in piece.vertices:
                if not any(v.isclose(w, 1e-12 * max(1.0, self.scale)) for w in out):
                    out.append(v)
        return out

    def contains_array(self, c: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        c = np.atleast_2d(np.asarray(c, dtype=float))
        atol = tol * self.scale
        hit = np.zeros(len(c), dtype=bool)
        for piece in self.pieces:
            if isinstance(piece, CurvedPatch):
                hit |= piece.contains_array(c, atol, tol * self.scale**3)
            else:
                hit |= piece.contains_array(c, atol)
        return hit

    def contains(self, u: Sym2, tol: float = 1e-9) -> bool:
        return bool(self.contains_array(u.components()[None, :], tol)[0])

    def translated(self, m0: Sym2) -> "HullRegion":
        return self.map(lambda u: u + m0, 1.0)

    def scaled(self, s: float) -> "HullRegion":
        return self.map(lambda u: s * u, s)

    def map(self, f, s: float) -> "HullRegion":
        pieces = []
        for piece in self.pieces:
            if isinstance(piece, Point):
                pieces.append(Point(f(piece.p)))
            elif isinstance(piece, Segment):
                pieces.append(Segment(f(piece.a), f(piece.b)))
            elif isinstance(piece, Triangle):
                pieces.append(Triangle(f(piece.a), f(piece.b), f(piece.c)))
            else:
                t = piece.triangle
                h = piece.h
                pieces.append(
                    CurvedPatch(
                        Triangle(f(t.a), f(t.b), f(t.c)),
                        HbarForm(s * h.c, f(h.u0), s * h.v1, s * h.v2),
                        piece.h_scale * s**3,
                    )
                )
        return HullRegion(tuple(pieces), self.scale * s)


def region_contains(region: HullRegion, u: Sym2, tol: float = 1e-9) -> bool:
    return region.contains(u, tol)


# -- well set ----------------------------------------------------------------

class WellSet:
    """Three wells with their classification and plane data, computed lazily."""

    def __init__(self, wells: Sequence[Sym2], tol: float | None = None):
        if len(wells) != 3:
            raise ValueError("a well set has exactly three wells")
        self.wells = tuple(wells)
        self.tol = tol

    @cached_property
    def wclass(self) -> WellClass:
        return classify(self.wells, self.tol)

    @cached_property
    def plane(self) -> pg.AffinePlane:
        return pg.affine_plane(self.wells)

    @cached_property
    def scale(self) -> float:
        return pg.well_scale(self.wells)

    @property
    def labeled(self) -> tuple:
        """Wells in the U1, U2, U3 labeling of the classification."""
        return tuple(self.wells[i] for i in self.wclass.perm)

    @cached_property
    def frame(self) -> pg.ConeFrame:
        return pg.frame_from_normal(self.plane, self.tol)

    @cached_property
    def u0_result(self) -> Optional[pg.U0Result]:
        if self.wclass.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
            return None
        return pg.compute_u0(self.wells, self.wclass, self.tol)

    @property
    def u0(self) -> Optional[Sym2]:
        r = self.u0_result
        return None if r is None else r.u0

    @cached_property
    def rank_one_center(self) -> Optional[Sym2]:
        """Point of the plane rank-one connected to all three wells, when a rank-one pair exists.

        Type two: U0 itself.  Type one: the exterior point on the line U2U3.
        """
        wc = self.wclass
        if wc.strict or wc.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
            return None
        if wc.kind is WellKind.TYPE_TWO:
            return self.u0
        return pg.exterior_u0(self.labeled, self.tol)[0]

    def origin(self) -> Sym2:
        """Origin for frame coordinates: U0 when defined, else U1."""
        return self.u0 if self.u0 is not None else self.wells[0]

    def require_plane(self) -> None:
        if self.wclass.kind is WellKind.DEGENERATE_SPAN:
            raise WrongClass("wells are collinear or coincident; no plane to work in")


def lamination_hull(ws: WellSet) -> HullRegion:
    kind = ws.wclass.kind
    u1, u2, u3 = ws.labeled
    if kind is WellKind.DEGENERATE_SPAN:
        raise WrongClass("lamination hull needs three wells spanning a plane")
    if kind is WellKind.TYPE_ONE:
        pieces = (Point(u1), Segment(u2, u3))
    elif kind is WellKind.TYPE_TWO:
        u0 = ws.u0
        pieces = (Triangle(u0, u1, u2), Triangle(u0, u1, u3))
    elif kind is WellKind.ALL_COMPATIBLE:
        pieces = (Triangle(u1, u2, u3),)
    else:
        pieces = (Point(u1), Point(u2), Point(u3))
    return HullRegion(pieces, ws.scale)


def convex_hull_region(ws: WellSet) -> HullRegion:
    return HullRegion((Triangle(*ws.labeled),), ws.scale)


def bound_matrix_c(v1: Sym2, v2: Sym2, v3: Sym2) -> Sym2:
    """The matrix C, constant on V2 and V3, normalized by the Gram area |P|."""
    d21, d31, d32 = v2 - v1, v3 - v1, v3 - v2
    num = sym2.inner(d31, d32) * d21 + sym2.inner(d21, v2 - v3) * d31
    p2 = sym2.inner(d21, d21) * sym2.inner(d31, d31) - sym2.inner(d21, d31) ** 2
    scale = max(d21.norm(), d31.norm(), d32.norm())
    if p2 <= (1e-12 * scale**2) ** 2 or scale == 0.0:
        raise DegeneratePlane("centered wells are collinear; |P| vanishes")
    c = num / math.sqrt(p2)
    side = sym2.inner(c, v2)
    if abs(side) <= 1e-12 * c.norm() * max(v2.norm(), 1e-300):
        side = sym2.inner(c, v2 - v1)
    return -c if side < 0 else c


def hbar(v: Sym2, v1: Sym2, v2: Sym2, c: Sym2) -> float:
    return sym2.inner(c, v - v2) * sym2.det(v1) - sym2.inner(c, v1 - v2) * sym2.det(v)


def component_h(x, y, xi: float, eta: float, gamma: float, zeta: float):
    """Component form of the boundary curve from the coordinates of the centered wells.

    V1 = (xi, eta), V2 = (gamma, 0), V3 = (0, zeta) in the rank-one frame.
    """
    return x * y * (eta * gamma + (xi - gamma) * zeta) - xi * eta * (gamma * y + (x - gamma) * zeta)


@dataclass(frozen=True)
class OuterBound:
    c: Sym2
    u0: Sym2
    h_coeffs: tuple  # (A, B, D, const) of A*x*y + B*x + D*y + const
    region: HullRegion
    frame_coords: tuple  # (xi, eta, gamma, zeta) of V1, V2, V3


def _h_coeffs(c: Sym2, v1: Sym2, v2: Sym2, frame: pg.ConeFrame) -> tuple:
    d1 = sym2.det(v1)
    return (
        -sym2.inner(c, v1 - v2) * frame.cross_sq,
        sym2.inner(c, frame.e_a) * d1,
        sym2.inner(c, frame.e_n) * d1,
        -sym2.inner(c, v2) * d1,
    )


def centered_wells(ws: WellSet, center: Sym2) -> tuple:
    return tuple(u - center for u in ws.labeled)


def outer_bound(ws: WellSet) -> OuterBound:
    wc = ws.wclass
    if wc.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        raise WrongClass(f"outer bound applies to type one/two sets, got {wc.kind.value}")
    if not wc.strict:
        raise RankOnePresent("a rank-one pair is present; the quasiconvex hull equals the lamination hull")
    u0 = ws.u0
    v1, v2, v3 = centered_wells(ws, u0)
    c = bound_matrix_c(v1, v2, v3)
    frame = ws.frame
    xi, eta = pg.to_plane_coords(v1, Sym2.zero(), frame)
    p2 = pg.to_plane_coords(v2, Sym2.zero(), frame)
    p3 = pg.to_plane_coords(v3, Sym2.zero(), frame)
    # one of V2, V3 sits on each axis; the bound is symmetric in the two
    if abs(p2[0]) >= abs(p2[1]):
        gamma, zeta = p2[0], p3[1]
    else:
        gamma, zeta = p3[0], p2[1]
    patch = CurvedPatch(Triangle(*ws.labeled), HbarForm(c, u0, v1, v2), ws.scale**3)
    return OuterBound(c, u0, _h_coeffs(c, v1, v2, frame), HullRegion((patch,), ws.scale), (xi, eta, gamma, zeta))


class HullStatus(str, enum.Enum):
    EXACT_EQUALS_LAMINATION = "exact_equals_lamination"
    EXACT_CONVEX = "exact_convex"
    EXACT_WELLS = "exact_wells"
    BOUND_ONLY = "bound_only"


@dataclass(frozen=True)
class QuasiconvexResult:
    status: HullStatus
    inner: HullRegion
    outer: HullRegion
    bound: Optional[OuterBound] = field(default=None)


def quasiconvex_hull(ws: WellSet) -> QuasiconvexResult:
    ws.require_plane()
    kind = ws.wclass.kind
    inner = lamination_hull(ws)
    if kind is WellKind.ALL_COMPATIBLE:
        return QuasiconvexResult(HullStatus.EXACT_CONVEX, inner, inner)
    if kind is WellKind.ALL_INCOMPATIBLE:
        return QuasiconvexResult(HullStatus.EXACT_WELLS, inner, inner)
    if not ws.wclass.strict:
        return QuasiconvexResult(HullStatus.EXACT_EQUALS_LAMINATION, inner, inner)
    bound = outer_bound(ws)
    return QuasiconvexResult(HullStatus.BOUND_ONLY, inner, bound.region, bound)
