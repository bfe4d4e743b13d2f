import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from triwell import ThreeWellHull
from triwell.errors import AsymmetricInput, ParseError, WrongClass
from triwell.hulls import HullStatus, WellKind
from triwell.sym2 import Sym2

D = Sym2.diag
TYPE_TWO = np.array([[[2, 0], [0, -1]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]], dtype=float)


def test_params_and_clone():
    est = ThreeWellHull(tol=1e-8)
    assert est.get_params() == {"tol": 1e-8}
    other = clone(est)
    assert other.tol == 1e-8 and other is not est
    assert not hasattr(other, "status_")


def test_fit_attributes():
    est = ThreeWellHull().fit(TYPE_TWO)
    assert est.class_.kind is WellKind.TYPE_TWO
    assert est.status_ is HullStatus.BOUND_ONLY
    assert est.u0_.isclose(D(1, 0), 1e-14)
    assert est.frame_ is not None and est.n_features_in_ == 3
    assert est.bound_.c.isclose(D(-1, 1), 1e-14)


def test_fit_accepts_component_rows_and_sym2():
    rows = [[2, -1, 0], [1, 1, 0], [0, 0, 0]]
    a = ThreeWellHull().fit(rows)
    b = ThreeWellHull().fit([D(2, -1), D(1, 1), D(0, 0)])
    assert a.status_ is b.status_ is HullStatus.BOUND_ONLY


def test_predict_levels():
    est = ThreeWellHull().fit(TYPE_TWO)
    # frame coords (x, y) about U0 give diag(1 + y, x); h = 3xy - x + y + 1 on the gap triangle
    pts = {(0.3, 0.3): 2, (0.2, -0.2): 1, (0.45, -0.45): 0, (0.0, 0.0): 2}
    comps = [[1 + y, x, 0.0] for x, y in pts]
    assert est.predict(comps).tolist() == list(pts.values())
    assert est.predict([[5, 5, 0]]).tolist() == [0]
    grid = np.array([[a, b, 0.0] for a in np.linspace(0, 2, 21) for b in np.linspace(-1, 1, 21)])
    levels = est.predict(grid)
    h = est.decision_function(grid[levels >= 1])
    assert (h >= -1e-9).all()


def test_transform_and_decision_function():
    est = ThreeWellHull().fit(TYPE_TWO)
    xy = est.transform(TYPE_TWO)
    assert np.allclose(xy, [[-1, 1], [1, 0], [0, -1]], atol=1e-12)
    assert est.decision_function([[1, 0, 0]]) == pytest.approx([1.0])
    assert np.allclose(est.decision_function(TYPE_TWO), 0, atol=1e-12)
    assert est.fit_transform(TYPE_TWO).shape == (3, 2)


def test_decision_function_needs_bound(all_compatible_wells):
    est = ThreeWellHull().fit(all_compatible_wells)
    assert est.status_ is HullStatus.EXACT_CONVEX
    with pytest.raises(WrongClass):
        est.decision_function([[0, 0, 0]])


def test_transform_without_frame():
    # trace-free plane: the normal is a multiple of the identity, so no rank-one directions
    est = ThreeWellHull().fit([D(0, 0), D(1, -1), Sym2(0, 0, 1)])
    assert est.frame_ is None and est.status_ is HullStatus.EXACT_CONVEX
    with pytest.raises(WrongClass):
        est.transform([[0, 0, 0]])


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ThreeWellHull().predict([[0, 0, 0]])


def test_validation_errors():
    with pytest.raises(ParseError):
        ThreeWellHull().fit(TYPE_TWO[:2])
    with pytest.raises(ParseError):
        ThreeWellHull().fit([[np.nan, 0, 0], [1, 1, 0], [0, 0, 0]])
    with pytest.raises(ParseError):
        ThreeWellHull().fit(np.zeros((3, 4)))
    bad = TYPE_TWO.copy()
    bad[0, 0, 1] = 1e-6
    with pytest.raises(AsymmetricInput):
        ThreeWellHull().fit(bad)
    assert issubclass(AsymmetricInput, ParseError)
