"""Hulls of three symmetric 2x2 wells: classification, lamination hull, quadratic outer bound."""

import sys

from .errors import (
    AsymmetricInput,
    DegeneratePlane,
    DetPositive,
    DomainError,
    NormalNotIndefinite,
    NotInPlane,
    ParseError,
    RankOnePresent,
    TriwellError,
    WrongClass,
)
from .estimator import ThreeWellHull
from .hulls import (
    CurvedPatch,
    HullRegion,
    HullStatus,
    OuterBound,
    Point,
    QuasiconvexResult,
    Segment,
    Triangle,
    WellClass,
    WellKind,
    WellSet,
    bound_matrix_c,
    classify,
    hbar,
    lamination_hull,
    outer_bound,
    quasiconvex_hull,
    region_contains,
)
from .plane import affine_plane, compute_u0, exterior_u0, frame_from_normal, segment_rank_one_point, to_plane_coords
from .sym2 import Sym2, adjugate, compat, cone_membership, det, inner, rank_one_decompose

__version__ = "0.1.0"

__all__ = [name for name, obj in list(globals().items()) if not name.startswith("_") and not isinstance(obj, type(sys))]
