"""scikit-learn style front end for the hull computations."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import plane as pg
from ._validation import check_sym2_array, check_wells
from .errors import DomainError, WrongClass
from .hulls import HullStatus, WellSet, quasiconvex_hull


class ThreeWellHull(TransformerMixin, BaseEstimator):
    """Fit three wells; classify query matrices against the hulls.

    Parameters
    ----------
    tol : float or None
        Relative determinant tolerance; None uses the library default.

    Attributes
    ----------
    wells_ : list of Sym2
    class_ : WellClass
    status_ : HullStatus
    inner_, outer_ : HullRegion
        Lamination hull and the outer region (equal unless ``status_`` is BOUND_ONLY).
    u0_ : Sym2 or None
    frame_ : ConeFrame or None
        None when the plane of the wells has no rank-one directions.
    bound_ : OuterBound or None
    """

    def __init__(self, tol: float | None = None):
        self.tol = tol

    def fit(self, X, y=None):
        self.wells_ = check_wells(X)
        ws = WellSet(self.wells_, self.tol)
        res = quasiconvex_hull(ws)
        self.class_ = ws.wclass
        self.status_ = res.status
        self.inner_ = res.inner
        self.outer_ = res.outer
        self.bound_ = res.bound
        self.u0_ = ws.u0
        try:
            self.frame_ = ws.frame
        except DomainError:
            self.frame_ = None
        self.origin_ = ws.origin()
        self.n_features_in_ = 3
        return self

    def predict(self, X) -> np.ndarray:
        """2 inside L^e, 1 in the outer region only, 0 outside."""
        check_is_fitted(self, "status_")
        c = check_sym2_array(X)
        inner = self.inner_.contains_array(c)
        outer = self.outer_.contains_array(c)
        return np.where(inner, 2, np.where(outer, 1, 0))

    def transform(self, X) -> np.ndarray:
        """Rank-one frame coordinates (x, y) relative to U0 (or U1 when U0 is undefined)."""
        check_is_fitted(self, "status_")
        if self.frame_ is None:
            raise WrongClass("the plane of the wells carries no rank-one frame")
        return pg.plane_coords_array(check_sym2_array(X), self.origin_, self.frame_)

    def decision_function(self, X) -> np.ndarray:
        """ħ(U - U0); non-negative exactly on the outer region inside the triangle."""
        check_is_fitted(self, "status_")
        if self.status_ is not HullStatus.BOUND_ONLY:
            raise WrongClass(f"no quadratic bound for status {self.status_.value}")
        patch = self.bound_.region.pieces[0]
        return patch.h.eval_array(check_sym2_array(X))
