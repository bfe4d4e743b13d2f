"""Input checks shared by the estimator and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .errors import AsymmetricInput, ParseError
from .sym2 import Sym2

SYMMETRY_ATOL = 1e-12


def check_sym2_array(X, name: str = "X") -> np.ndarray:
    """Coerce matrices to an (m, 3) array of (xx, yy, xy).

    Accepts Sym2 instances, (m, 3) component rows, (m, 2, 2) matrices or a
    single matrix of any of these forms.  Full matrices must be symmetric to 1e-12.
    """
    try:
        return _check(X, name)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{name}: {exc}") from exc


def _check(X, name: str) -> np.ndarray:
    if isinstance(X, Sym2):
        X = [X]
    if isinstance(X, (list, tuple)) and X and all(isinstance(m, Sym2) for m in X):
        return check_array(np.array([m.components() for m in X]), input_name=name)
    arr = np.asarray(X, dtype=float)
    if arr.shape == (2, 2) or arr.shape == (3,):
        arr = arr[None, ...]
    if arr.ndim == 3:
        if arr.shape[1:] != (2, 2):
            raise ParseError(f"{name}: expected matrices of shape (2, 2), got {arr.shape[1:]}")
        arr = check_array(arr, allow_nd=True, input_name=name)
        gap = np.abs(arr[:, 0, 1] - arr[:, 1, 0])
        if np.any(gap > SYMMETRY_ATOL):
            i = int(np.argmax(gap))
            raise AsymmetricInput(f"{name}[{i}] is not symmetric (|M12 - M21| = {gap[i]:.3e})")
        return np.column_stack([arr[:, 0, 0], arr[:, 1, 1], arr[:, 0, 1]])
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ParseError(f"{name}: expected (m, 3) components or (m, 2, 2) matrices, got shape {arr.shape}")
    return check_array(arr, input_name=name)


def check_wells(X) -> list:
    comps = check_sym2_array(X, "wells")
    if len(comps) != 3:
        raise ParseError(f"wells: expected exactly three matrices, got {len(comps)}")
    return [Sym2.from_components(c) for c in comps]
