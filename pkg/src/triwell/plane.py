"""Geometry of the affine plane spanned by three wells.

Inside a plane whose normal Q has det Q < 0 there are exactly two rank-one
directions, ``E_a = a_perp (x) a_perp`` and ``E_n = n_perp (x) n_perp``, where
``Q = nu * sym(a (x) n)``.  Coordinates (xi, eta) in that basis make
compatibility a sign test: ``det(xi E_a + eta E_n) = xi * eta * |a x n|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import sym2
from .errors import DegeneratePlane, NormalNotIndefinite, NotInPlane, WrongClass
from .sym2 import Sym2

SPAN_RTOL = 1e-8
COORD_RTOL = 1e-8


def well_scale(wells: Sequence[Sym2]) -> float:
    """Diameter of the well set in the Frobenius norm."""
    return max((wells[i] - wells[j]).norm() for i in range(len(wells)) for j in range(i))


@dataclass(frozen=True)
class AffinePlane:
    base: Sym2
    normal: Sym2
    span_dim: int


@dataclass(frozen=True)
class ConeFrame:
    a: np.ndarray
    n: np.ndarray
    e_a: Sym2
    e_n: Sym2
    cross_sq: float

    def at(self, origin: Sym2, xi: float, eta: float) -> Sym2:
        return origin + xi * self.e_a + eta * self.e_n


class PlaneCoords(NamedTuple):
    xi: float
    eta: float


def affine_plane(wells: Sequence[Sym2]) -> AffinePlane:
    base = wells[0]
    d = np.column_stack([(w - base).to_vec() for w in wells[1:]])
    sv = np.linalg.svd(d, compute_uv=False)
    if sv[0] <= 1e-300:
        return AffinePlane(base, Sym2.zero(), 0)
    span = int(np.sum(sv > SPAN_RTOL * sv[0]))
    if span < 2:
        return AffinePlane(base, Sym2.zero(), span)
    c = np.cross(d[:, 0], d[:, 1])
    return AffinePlane(base, Sym2.from_vec(c / np.linalg.norm(c)), 2)


def frame_from_normal(plane: AffinePlane, tol: float | None = None) -> ConeFrame:
    if plane.span_dim != 2:
        raise DegeneratePlane(f"well set spans dimension {plane.span_dim}, not a plane")
    q = plane.normal
    if sym2.det(q) >= -sym2.det_threshold(q, tol):
        raise NormalNotIndefinite(
            f"det of the plane normal is {sym2.det(q):.3e} >= 0; the plane carries no rank-one lines"
        )
    a, n, _ = sym2.rank_one_decompose(q)
    ap, np_ = sym2.perp(a), sym2.perp(n)
    return ConeFrame(a, n, Sym2.outer(ap), Sym2.outer(np_), sym2.cross2(a, n) ** 2)


def to_plane_coords(u: Sym2, origin: Sym2, frame: ConeFrame) -> PlaneCoords:
    d = (u - origin).to_vec()
    basis = np.column_stack([frame.e_a.to_vec(), frame.e_n.to_vec()])
    coef, *_ = np.linalg.lstsq(basis, d, rcond=None)
    resid = np.linalg.norm(basis @ coef - d)
    if resid > COORD_RTOL * max(1.0, np.linalg.norm(d)):
        raise NotInPlane(f"point lies {resid:.3e} off the plane of the frame")
    return PlaneCoords(float(coef[0]), float(coef[1]))


def plane_coords_array(c: np.ndarray, origin: Sym2, frame: ConeFrame) -> np.ndarray:
    """Frame coordinates for an (m, 3) array of in-plane components; no residual check."""
    basis = np.column_stack([frame.e_a.to_vec(), frame.e_n.to_vec()])
    pinv = np.linalg.pinv(basis)
    vec = np.column_stack([c[:, 0] - origin.xx, c[:, 1] - origin.yy, sym2.SQRT2 * (c[:, 2] - origin.xy)])
    return vec @ pinv.T


class U0Result(NamedTuple):
    u0: Sym2
    barycentric: tuple
    inside: bool
    det_u1: float
    frame: ConeFrame
    coords: tuple


def barycentric(point: Sym2, triangle: Sequence[Sym2]) -> np.ndarray:
    """Barycentric coordinates of a point of the triangle's plane (least squares)."""
    u1 = triangle[0]
    basis = np.column_stack([(triangle[1] - u1).to_vec(), (triangle[2] - u1).to_vec()])
    coef, *_ = np.linalg.lstsq(basis, (point - u1).to_vec(), rcond=None)
    return np.array([1.0 - coef.sum(), coef[0], coef[1]])


def printed_u0_weights(alpha, beta, xi2, eta2, xi3, eta3) -> tuple:
    """Closed-form barycentric weights of U0 (with the lambda_2 typo repaired)."""
    den = xi2 * eta3 - xi3 * eta2
    l1 = ((alpha - xi2) * (beta - eta3) - (alpha - xi3) * (beta - eta2)) / den
    l2 = ((alpha - xi3) * beta - (beta - eta3) * alpha) / den
    l3 = ((beta - eta2) * alpha - (alpha - xi2) * beta) / den
    return l1, l2, l3


def compute_u0(wells: Sequence[Sym2], wclass, tol: float | None = None) -> U0Result:
    """Intersection of the rank-one lines through the two paired wells.

    ``wclass`` is a :class:`triwell.hulls.WellClass` of kind type one or type
    two; its permutation says which well plays U1.
    """
    from .hulls import WellKind

    if wclass.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        raise WrongClass(f"U0 is defined for type one/two sets, got {wclass.kind.value}")
    u1, u2, u3 = (wells[i] for i in wclass.perm)
    frame = frame_from_normal(affine_plane([u1, u2, u3]), tol)
    xi2, eta2 = to_plane_coords(u2, u1, frame)
    xi3, eta3 = to_plane_coords(u3, u1, frame)
    # ties go to the index-2 candidate
    alpha = xi2 if abs(xi2) <= abs(xi3) else xi3
    beta = eta2 if abs(eta2) <= abs(eta3) else eta3
    u0 = frame.at(u1, alpha, beta)
    lam = barycentric(u0, [u1, u2, u3])
    eps = 1e-9
    inside = bool(np.all(lam >= -eps) and np.all(lam <= 1 + eps))
    return U0Result(
        u0,
        tuple(float(x) for x in lam),
        inside,
        sym2.det(u1 - u0),
        frame,
        (xi2, eta2, xi3, eta3, alpha, beta),
    )


def exterior_u0(wells: Sequence[Sym2], tol: float | None = None) -> tuple[Sym2, float]:
    """Point on the line U2U3 rank-one compatible with all three wells.

    Needs det(U3 - U2) = 0.  Along U2 + t (U3 - U2) the determinant against
    U1 is affine in t; its root t0 gives U0.
    """
    u1, u2, u3 = wells
    d23 = u3 - u2
    if abs(sym2.det(d23)) > sym2.det_threshold(d23, tol):
        raise WrongClass("U2 and U3 are not rank-one connected")
    d21 = u2 - u1
    den = sym2.inner(sym2.adjugate(d23), d21)
    if abs(den) <= 1e-12 * max(1.0, d23.norm() * d21.norm()):
        raise DegeneratePlane("determinant along U2U3 does not vary; plane is degenerate")
    t0 = -sym2.det(d21) / den
    return t0 * u3 + (1.0 - t0) * u2, t0


def segment_rank_one_point(a: Sym2, b: Sym2, p: Sym2) -> float | None:
    """Smallest t in (0, 1] with det(t a + (1 - t) b - p) = 0.

    The determinant is the quadratic ``det(b-p) + t <S(a-b), b-p> + t^2 det(a-b)``.
    Returns None when no root lies in (0, 1], including the identically-zero case.
    """
    d = a - b
    r = b - p
    qa = sym2.det(d)
    qb = sym2.inner(sym2.adjugate(d), r)
    qc = sym2.det(r)
    scale = max(abs(qa), abs(qb), abs(qc))
    if scale == 0.0:
        return None
    eps = 1e-14 * scale
    roots: list[float] = []
    if abs(qa) <= eps:
        if abs(qb) > eps:
            roots.append(-qc / qb)
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= -eps * scale:
            sq = math.sqrt(max(disc, 0.0))
            q = -0.5 * (qb + math.copysign(sq, qb))
            if q != 0.0:
                roots.extend([q / qa, qc / q])
            else:
                roots.append(0.0)
    t_min = 1e-12
    ok = [t for t in roots if t_min < t <= 1.0 + 1e-12]
    return min(ok) if ok else None
