"""Polyconvex biconjugate of the penalty f_C, evaluated through its dual form.

For wells centered so that det V2 = det V3 = 0,

    f^pp(V) = sup_{(k, d) in E} k <V, C> + d det V - max_{U in {0, V1, V2, V3}} (k <C, U> + d det U)

with E = [-1, 1] x [-1, 0].  The bracket is linear in (k, d) minus a max of
linear forms through the origin, so its supremum over the rectangle sits at a
corner, at the origin, or where a breakline between two of the linear forms
meets the boundary.  ``dual_candidates`` lists those points once per penalty;
evaluation is then one matrix product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import sym2
from ..errors import DomainError, WrongClass
from ..hulls import HullRegion, WellKind, WellSet, bound_matrix_c, lamination_hull
from ..sym2 import Sym2
from .grid import BaryGrid, GridField

KERNEL_RTOL = 1e-7


@dataclass(frozen=True)
class DualRect:
    k_min: float = -1.0
    k_max: float = 1.0
    d_min: float = -1.0
    d_max: float = 0.0
    grid_k: int = 201
    grid_d: int = 101

    def contains(self, k: float, d: float) -> bool:
        return self.k_min <= k <= self.k_max and self.d_min <= d <= self.d_max

    def mesh(self) -> np.ndarray:
        k = np.linspace(self.k_min, self.k_max, self.grid_k)
        d = np.linspace(self.d_min, self.d_max, self.grid_d)
        kk, dd = np.meshgrid(k, d, indexing="ij")
        return np.column_stack([kk.ravel(), dd.ravel()])


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty f_C(U) = 0 on L^e and |det U| + |<C, U>| elsewhere, in centered coordinates."""

    c: Sym2
    center: Sym2
    wells: tuple  # centered V1, V2, V3 in the labeling of the well set
    hull: HullRegion  # lamination hull of the uncentered wells
    scale: float
    route: str  # "bound", "tilted" or "normal"
    tilt: float = math.pi / 2

    @property
    def anchors(self) -> tuple:
        return (Sym2.zero(), *self.wells)

    def anchor_table(self) -> np.ndarray:
        """Rows (<C, U>, det U) for U in {0, V1, V2, V3}."""
        return np.array([[sym2.inner(self.c, u), sym2.det(u)] for u in self.anchors])


def _tilted(q: Sym2, c: Sym2, v1: Sym2, v2: Sym2) -> tuple:
    """Q cos t + C sin t at half the first positive root of t -> det(Q cos t + C sin t).

    With tau = tan t the determinant is cos^2 t (det Q + <S Q, C> tau + det C tau^2),
    negative at t = 0 since det Q < 0.
    """
    c_hat = c / c.norm()
    a, b, e = sym2.det(q), sym2.inner(sym2.adjugate(q), c_hat), sym2.det(c_hat)
    roots = [r.real for r in np.roots([e, b, a]) if abs(r.imag) < 1e-12 and r.real > 0] if e or b else []
    t = 0.5 * (math.atan(min(roots)) if roots else math.pi / 2)
    ct = math.cos(t) * q + math.sin(t) * c_hat
    if not (sym2.det(ct) < 0 and sym2.inner(ct, v1) <= 0 < sym2.inner(ct, v2)):
        raise WrongClass("no tilt of the plane normal gives an admissible penalty matrix")
    return ct, t


def make_penalty(ws: WellSet) -> PenaltySpec:
    wc = ws.wclass
    if wc.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        raise WrongClass(f"the penalty family is built for type one/two sets, got {wc.kind.value}")
    hull = lamination_hull(ws)
    q = ws.plane.normal
    if not wc.strict:
        center = ws.rank_one_center
        v = tuple(u - center for u in ws.labeled)
        return PenaltySpec(q, center, v, hull, ws.scale, "normal", 0.0)
    center = ws.u0
    v = tuple(u - center for u in ws.labeled)
    c = bound_matrix_c(*v)
    if wc.kind is WellKind.TYPE_TWO:
        return PenaltySpec(c, center, v, hull, ws.scale, "bound")
    ct, t = _tilted(q, c, v[0], v[1])
    return PenaltySpec(ct, center, v, hull, ws.scale, "tilted", t)


def eval_penalty(spec: PenaltySpec, v: Sym2) -> float:
    """f_C at a centered matrix V."""
    if spec.hull.contains(v + spec.center):
        return 0.0
    return abs(sym2.det(v)) + abs(sym2.inner(spec.c, v))


def eval_penalty_array(spec: PenaltySpec, comps: np.ndarray) -> np.ndarray:
    comps = np.atleast_2d(comps)
    inside = spec.hull.contains_array(comps + spec.center.components())
    return np.where(inside, 0.0, np.abs(sym2.det_array(comps)) + np.abs(sym2.inner_array(comps, spec.c)))


def sup_lagrangian(k: float, dstar: float, spec: PenaltySpec, rect: DualRect = DualRect()) -> float:
    """Closed-form sup over U of <kC, U> + d det U - f_C(U) on the finite branch."""
    if not rect.contains(k, dstar):
        raise DomainError(f"(k, d*) = ({k}, {dstar}) lies outside [-1, 1] x [-1, 0]")
    tab = spec.anchor_table()
    return float(np.max(k * tab[:, 0] + dstar * tab[:, 1]))


def _lagrangian(vstar: Sym2, dstar: float, spec: PenaltySpec, comps: np.ndarray) -> np.ndarray:
    return sym2.inner_array(comps, vstar) + dstar * sym2.det_array(comps) - eval_penalty_array(spec, comps)


def _rank_one_dirs(c: Sym2, count: int = 64) -> np.ndarray:
    """u (x) u components for u on the half circle, plus the isotropic directions of C."""
    ang = list(np.linspace(0.0, math.pi, count, endpoint=False))
    # u^T C u = 0 : c11 cos^2 + 2 c12 cos sin + c22 sin^2 = 0
    if abs(c.yy) > 1e-14:
        disc = c.xy**2 - c.xx * c.yy
        if disc >= 0:
            for sgn in (1.0, -1.0):
                ang.append(math.atan((-c.xy + sgn * math.sqrt(disc)) / c.yy) % math.pi)
    else:
        ang.append(math.pi / 2)
        if abs(c.xy) > 1e-14:
            ang.append(math.atan(-c.xx / (2.0 * c.xy)) % math.pi)
    u = np.array([[math.cos(a), math.sin(a)] for a in ang])
    return np.column_stack([u[:, 0] ** 2, u[:, 1] ** 2, u[:, 0] * u[:, 1]])


def sample_points(spec: PenaltySpec, rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Centered test matrices: anchors, points of L^e, a ball, and rank-one rays."""
    out = [np.array([u.components() for u in spec.anchors])]
    center = spec.center.components()
    for piece in spec.hull.pieces:
        verts = np.array([u.components() for u in piece.vertices]) - center
        w = rng.dirichlet(np.ones(len(verts)), size=max(1, n // 8))
        out.append(w @ verts)
    g = rng.normal(size=(n, 3))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = radius * rng.random(n) ** (1.0 / 3.0)
    out.append(g * r[:, None])
    dirs = _rank_one_dirs(spec.c)
    radii = spec.scale * np.geomspace(1e-2, radius / spec.scale, 12)
    for s in (1.0, -1.0):
        out.append((s * radii[:, None, None] * dirs[None, :, :]).reshape(-1, 3))
    return np.vstack(out)


def sup_lagrangian_sampled(
    vstar: Sym2, dstar: float, spec: PenaltySpec, rng: np.random.Generator, n: int = 4000, radius: float | None = None
) -> float:
    """Sampled sup of <V*, U> + d det U - f_C(U); valid for any (V*, d)."""
    radius = 1e3 * spec.scale if radius is None else radius
    comps = sample_points(spec, rng, n, radius)
    return float(np.max(_lagrangian(vstar, dstar, spec, comps)))


def dual_candidates(spec: PenaltySpec, rect: DualRect = DualRect()) -> np.ndarray:
    tab = spec.anchor_table()
    pts = [
        (rect.k_min, rect.d_min),
        (rect.k_min, rect.d_max),
        (rect.k_max, rect.d_min),
        (rect.k_max, rect.d_max),
        (0.0, 0.0),
    ]
    for i in range(len(tab)):
        for j in range(i + 1, len(tab)):
            dc, dd = tab[i] - tab[j]
            # breakline dc * k + dd * d = 0 against the four edges
            if dd != 0.0:
                for k in (rect.k_min, rect.k_max):
                    d = -dc * k / dd
                    if rect.d_min <= d <= rect.d_max:
                        pts.append((k, d))
            if dc != 0.0:
                for d in (rect.d_min, rect.d_max):
                    k = -dd * d / dc
                    if rect.k_min <= k <= rect.k_max:
                        pts.append((k, d))
    return np.unique(np.array(pts), axis=0)


def _sup_over(kd: np.ndarray, tab: np.ndarray, lin: np.ndarray, quad: np.ndarray) -> np.ndarray:
    max_l = np.max(kd @ tab.T, axis=1)  # (K,)
    vals = np.outer(lin, kd[:, 0]) + np.outer(quad, kd[:, 1]) - max_l[None, :]
    return vals.max(axis=1)


def biconjugate_array(spec: PenaltySpec, comps: np.ndarray, rect: DualRect = DualRect()) -> np.ndarray:
    """Exact f^pp at centered matrices given as (m, 3) components."""
    comps = np.atleast_2d(comps)
    kd = dual_candidates(spec, rect)
    return _sup_over(kd, spec.anchor_table(), sym2.inner_array(comps, spec.c), sym2.det_array(comps))


def biconjugate(v: Sym2, spec: PenaltySpec, rect: DualRect = DualRect()) -> float:
    return float(biconjugate_array(spec, v.components()[None, :], rect)[0])


def biconjugate_grid(spec: PenaltySpec, comps: np.ndarray, rect: DualRect = DualRect()) -> np.ndarray:
    """Same supremum by brute force over a mesh of E; a lower bound converging to the exact value."""
    comps = np.atleast_2d(comps)
    return _sup_over(rect.mesh(), spec.anchor_table(), sym2.inner_array(comps, spec.c), sym2.det_array(comps))


def biconjugate_translated(spec: PenaltySpec, m0: Sym2, comps: np.ndarray, rect: DualRect = DualRect()) -> np.ndarray:
    """f^pp of g(U) = f(U - M0) at the matrices ``comps``, computed without shifting them.

    The dual variable of g is V* = kC - d S(M0); the conjugate of g at (V*, d)
    is <V*, M0> + d det M0 + maxL(k, d).
    """
    comps = np.atleast_2d(comps)
    kd = dual_candidates(spec, rect)
    tab = spec.anchor_table()
    s0 = sym2.adjugate(m0)
    max_l = np.max(kd @ tab.T, axis=1)
    k, d = kd[:, 0], kd[:, 1]
    # <M, V*> + d det M - <V*, M0> - d det M0 - maxL
    mv = np.outer(sym2.inner_array(comps, spec.c), k) - np.outer(sym2.inner_array(comps, s0), d)
    offset = k * sym2.inner(spec.c, m0) - d * sym2.inner(s0, m0) + d * sym2.det(m0) + max_l
    vals = mv + np.outer(sym2.det_array(comps), d) - offset[None, :]
    return vals.max(axis=1)


def translation_check(spec: PenaltySpec, m0: Sym2, comps: np.ndarray, rtol: float = 1e-8) -> dict:
    comps = np.atleast_2d(comps)
    direct = biconjugate_translated(spec, m0, comps)
    shifted = biconjugate_array(spec, comps - m0.components())
    dev = float(np.max(np.abs(direct - shifted))) if len(comps) else 0.0
    return {"max_deviation": dev, "bound": rtol * spec.scale, "passed": dev <= rtol * spec.scale, "count": len(comps)}


def kernel_tolerance(spec: PenaltySpec) -> float:
    return KERNEL_RTOL * spec.scale**3


def kernel_conditions(spec: PenaltySpec, comps: np.ndarray, tol: float) -> np.ndarray:
    """Necessary conditions every kernel point must meet (centered comps)."""
    v1, v2, _ = spec.wells
    c = spec.c
    det_v = sym2.det_array(comps)
    if spec.route == "normal":
        return det_v >= sym2.det(v1) - tol
    cv = sym2.inner_array(comps, c)
    ok = (cv - sym2.inner(c, v2) <= tol) & (cv - sym2.inner(c, v1) >= -tol)
    h = (cv - sym2.inner(c, v2)) * sym2.det(v1) - sym2.inner(c, v1 - v2) * det_v
    ok &= h >= -tol
    if spec.route == "bound":
        ok &= det_v >= sym2.det(v1) - tol
    else:
        ok &= det_v >= -tol
    return ok


def kernel_field(spec: PenaltySpec, grid: BaryGrid, tol: Optional[float] = None) -> GridField:
    tol = kernel_tolerance(spec) if tol is None else tol
    labeled = [v + spec.center for v in spec.wells]
    comps = grid.matrices(labeled) - spec.center.components()
    fpp = biconjugate_array(spec, comps)
    marked = fpp <= tol
    conditions_ok = kernel_conditions(spec, comps, 1e-9 * spec.scale**3)
    return GridField(grid, {"fpp": fpp, "in_kernel": marked, "conditions_ok": conditions_ok | ~marked})

