"""Algebra of symmetric 2x2 matrices (linear strains).

A :class:`Sym2` stores the three independent components ``xx``, ``yy`` and
``xy``.  The isometry ``M -> (xx, yy, sqrt(2) * xy)`` identifies the space with
R^3 so that the Frobenius product becomes the Euclidean dot product.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DetPositive

SQRT2 = math.sqrt(2.0)

#: relative tolerance for determinant signs, scaled by max(1, |M1 - M2|^2)
TOL_REL = 1e-9


@dataclass(frozen=True)
class Sym2:
    xx: float
    yy: float
    xy: float

    def __post_init__(self):
        object.__setattr__(self, "xx", float(self.xx))
        object.__setattr__(self, "yy", float(self.yy))
        object.__setattr__(self, "xy", float(self.xy))

    @classmethod
    def from_matrix(cls, m) -> "Sym2":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[1, 1], 0.5 * (m[0, 1] + m[1, 0]))

    @classmethod
    def from_vec(cls, v) -> "Sym2":
        """Inverse of :meth:`to_vec`."""
        return cls(v[0], v[1], v[2] / SQRT2)

    @classmethod
    def from_components(cls, c) -> "Sym2":
        return cls(c[0], c[1], c[2])

    @classmethod
    def diag(cls, a: float, b: float) -> "Sym2":
        return cls(a, b, 0.0)

    @classmethod
    def outer(cls, u) -> "Sym2":
        """The rank-one matrix u (x) u."""
        return cls(u[0] * u[0], u[1] * u[1], u[0] * u[1])

    @classmethod
    def sym_outer(cls, a, n) -> "Sym2":
        """Symmetrized tensor product (a (x) n + n (x) a) / 2."""
        return cls(a[0] * n[0], a[1] * n[1], 0.5 * (a[0] * n[1] + a[1] * n[0]))

    @classmethod
    def identity(cls) -> "Sym2":
        return cls(1.0, 1.0, 0.0)

    @classmethod
    def zero(cls) -> "Sym2":
        return cls(0.0, 0.0, 0.0)

    def to_vec(self) -> np.ndarray:
        return np.array([self.xx, self.yy, SQRT2 * self.xy])

    def components(self) -> np.ndarray:
        return np.array([self.xx, self.yy, self.xy])

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.xx, self.xy], [self.xy, self.yy]])

    def as_nested(self) -> list:
        return [[self.xx, self.xy], [self.xy, self.yy]]

    def __add__(self, other: "Sym2") -> "Sym2":
        return Sym2(self.xx + other.xx, self.yy + other.yy, self.xy + other.xy)

    def __sub__(self, other: "Sym2") -> "Sym2":
        return Sym2(self.xx - other.xx, self.yy - other.yy, self.xy - other.xy)

    def __neg__(self) -> "Sym2":
        return Sym2(-self.xx, -self.yy, -self.xy)

    def __mul__(self, s: float) -> "Sym2":
        return Sym2(s * self.xx, s * self.yy, s * self.xy)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> "Sym2":
        return Sym2(self.xx / s, self.yy / s, self.xy / s)

    def trace(self) -> float:
        return self.xx + self.yy

    def norm(self) -> float:
        return math.sqrt(inner(self, self))

    def isclose(self, other: "Sym2", atol: float = 1e-12) -> bool:
        return (self - other).norm() <= atol


def det(m: Sym2) -> float:
    return m.xx * m.yy - m.xy * m.xy


def adjugate(m: Sym2) -> Sym2:
    """The map M -> R M R^T with R the quarter rotation; equals adj(M)."""
    return Sym2(m.yy, m.xx, -m.xy)


def inner(m: Sym2, n: Sym2) -> float:
    return m.xx * n.xx + m.yy * n.yy + 2.0 * m.xy * n.xy


def det_threshold(diff: Sym2, tol: float | None = None) -> float:
    tol = TOL_REL if tol is None else tol
    return tol * max(1.0, inner(diff, diff))


def combination(coeffs: Iterable[float], mats: Iterable[Sym2]) -> Sym2:
    xx = yy = xy = 0.0
    for c, m in zip(coeffs, mats):
        xx += c * m.xx
        yy += c * m.yy
        xy += c * m.xy
    return Sym2(xx, yy, xy)


class CompatKind(str, enum.Enum):
    INCOMPATIBLE = "incompatible"
    RANK_ONE = "rank_one"
    COMPATIBLE = "compatible"


class Compat(NamedTuple):
    kind: CompatKind
    det_value: float


def compat(m1: Sym2, m2: Sym2, tol: float | None = None) -> Compat:
    """Classify the pair of strains by the sign of det(m1 - m2).

    Identical inputs come back as RANK_ONE with a zero determinant; callers
    needing two distinct wells must test ``(m1 - m2).norm()`` themselves.
    """
    d = m1 - m2
    value = det(d)
    thr = det_threshold(d, tol)
    if value > thr:
        kind = CompatKind.INCOMPATIBLE
    elif value < -thr:
        kind = CompatKind.COMPATIBLE
    else:
        kind = CompatKind.RANK_ONE
    return Compat(kind, value)


def is_compatible(m1: Sym2, m2: Sym2, tol: float | None = None) -> bool:
    return compat(m1, m2, tol).kind is not CompatKind.INCOMPATIBLE


class ConeSide(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def cone_membership(v: Sym2, u: Sym2, tol: float | None = None) -> ConeSide:
    """Locate ``v`` relative to the incompatible cone with vertex ``u``.

    Uses only the norm and the trace of v - u: the cone is
    ``|v - u| < |<v - u, Id>|``.  The comparison is done on squares, whose
    difference is twice the determinant, with the same threshold as
    :func:`compat`.
    """
    d = v - u
    gap = d.trace() ** 2 - d.norm() ** 2
    thr = 2.0 * det_threshold(d, tol)
    if gap > thr:
        return ConeSide.INTERIOR
    if gap < -thr:
        return ConeSide.EXTERIOR
    return ConeSide.BOUNDARY


class RankOneSplit(NamedTuple):
    a: np.ndarray
    n: np.ndarray
    nu: float


def _lex_key(v: np.ndarray) -> tuple:
    return tuple(np.round(v, 12))


def rank_one_decompose(q: Sym2, tol: float | None = None) -> RankOneSplit:
    """Write q = nu * (a (x) n + n (x) a) / 2 with unit vectors a, n and nu >= 0.

    Built from the eigenpairs: with eigenvalues lam_p >= 0 >= lam_m,
    ``nu = lam_p - lam_m`` and ``a +- n`` are the scaled eigenvectors.  Among
    the four equivalent choices (swap a/n, flip both) the one with
    lexicographically largest ``a`` is returned.  The zero matrix maps to
    ``(e1, e1, 0)``.
    """
    if det(q) > det_threshold(q, tol):
        raise DetPositive(f"det(Q) = {det(q):.3e} > 0; no rank-one splitting")
    e1 = np.array([1.0, 0.0])
    if q.norm() == 0.0:
        return RankOneSplit(e1, e1.copy(), 0.0)
    lam, vecs = np.linalg.eigh(q.as_matrix())
    lam_m, lam_p = lam
    nu = lam_p - lam_m
    if nu == 0.0:
        # a tiny multiple of Id accepted by the tolerance: nothing to split
        return RankOneSplit(e1, e1.copy(), 0.0)
    c = min(1.0, max(-1.0, (lam_p + lam_m) / nu))
    v_p = math.sqrt(2.0 * (1.0 + c)) * vecs[:, 1]
    v_m = math.sqrt(2.0 * (1.0 - c)) * vecs[:, 0]
    a = 0.5 * (v_p + v_m)
    n = 0.5 * (v_p - v_m)
    a /= np.linalg.norm(a)
    n /= np.linalg.norm(n)
    candidates = [(a, n), (n, a), (-a, -n), (-n, -a)]
    a, n = max(candidates, key=lambda p: _lex_key(p[0]))
    return RankOneSplit(a, n, float(nu))


def perp(v) -> np.ndarray:
    """Quarter-turn rotation R v."""
    return np.array([-v[1], v[0]])


def cross2(a, n) -> float:
    return float(a[0] * n[1] - a[1] * n[0])


# Vectorized helpers on arrays of components (..., 3) ordered (xx, yy, xy).

def det_array(c: np.ndarray) -> np.ndarray:
    return c[..., 0] * c[..., 1] - c[..., 2] * c[..., 2]


def inner_array(c: np.ndarray, m: Sym2) -> np.ndarray:
    return c[..., 0] * m.xx + c[..., 1] * m.yy + 2.0 * c[..., 2] * m.xy


def stack(mats: Iterable[Sym2]) -> np.ndarray:
    return np.array([m.components() for m in mats], dtype=float).reshape(-1, 3)
