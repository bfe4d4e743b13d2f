import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triwell import sym2
from triwell.errors import DetPositive
from triwell.sym2 import CompatKind, ConeSide, Sym2

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
sym2s = st.builds(Sym2, finite, finite, finite)
angles = st.floats(min_value=0.0, max_value=math.pi)


def test_det_examples():
    assert sym2.det(Sym2.identity()) == 1.0
    assert sym2.det(Sym2.diag(1, -1)) == -1.0
    assert sym2.det(Sym2.from_matrix([[1, 2], [2, 1]])) == -3.0


def test_adjugate_examples():
    assert sym2.adjugate(Sym2.diag(2, 5)) == Sym2.diag(5, 2)
    assert sym2.adjugate(Sym2(0, 0, 1)) == Sym2(0, 0, -1)


def test_inner_examples():
    assert sym2.inner(Sym2.identity(), Sym2.identity()) == 2.0
    assert sym2.inner(Sym2.diag(1, 0), Sym2.diag(0, 1)) == 0.0
    assert sym2.inner(Sym2(0, 0, 1), Sym2(0, 0, 1)) == 2.0


def test_compat_examples():
    assert sym2.compat(Sym2.identity(), Sym2.zero(), 1e-12) == (CompatKind.INCOMPATIBLE, 1.0)
    assert sym2.compat(Sym2.diag(1, 0), Sym2.zero(), 1e-12).kind is CompatKind.RANK_ONE
    assert sym2.compat(Sym2.diag(1, -1), Sym2.zero(), 1e-12) == (CompatKind.COMPATIBLE, -1.0)
    same = sym2.compat(Sym2.diag(1, 2), Sym2.diag(1, 2))
    assert same.kind is CompatKind.RANK_ONE and same.det_value == 0.0


def test_cone_membership_examples():
    assert sym2.cone_membership(Sym2.identity(), Sym2.zero()) is ConeSide.INTERIOR
    assert sym2.cone_membership(Sym2.diag(1, 0), Sym2.zero()) is ConeSide.BOUNDARY
    assert sym2.cone_membership(Sym2.diag(1, -1), Sym2.zero()) is ConeSide.EXTERIOR


def _reconstruct(split) -> Sym2:
    return split.nu * Sym2.sym_outer(split.a, split.n)


def test_rank_one_decompose_offdiagonal():
    q = Sym2(0, 0, 1 / math.sqrt(2))
    split = sym2.rank_one_decompose(q)
    assert split.nu == pytest.approx(math.sqrt(2))
    assert _reconstruct(split).isclose(q, 1e-12)
    assert {tuple(np.round(np.abs(split.a), 12)), tuple(np.round(np.abs(split.n), 12))} == {(1.0, 0.0), (0.0, 1.0)}


def test_rank_one_decompose_rank_one_and_diagonal():
    split = sym2.rank_one_decompose(Sym2.diag(1, 0))
    assert split.nu == pytest.approx(1.0)
    assert np.allclose(split.a, [1, 0]) and np.allclose(split.n, [1, 0])
    q = Sym2.diag(1, -1)
    split = sym2.rank_one_decompose(q)
    assert split.nu == pytest.approx(2.0)
    assert _reconstruct(split).isclose(q, 1e-12)
    assert np.allclose(np.abs(split.a), [1 / math.sqrt(2)] * 2)


def test_rank_one_decompose_conventions():
    split = sym2.rank_one_decompose(Sym2.zero())
    assert split.nu == 0.0 and np.array_equal(split.a, [1, 0]) and np.array_equal(split.n, [1, 0])
    with pytest.raises(DetPositive):
        sym2.rank_one_decompose(Sym2.identity())


@given(sym2s)
def test_adjugate_involution_and_det_identity(m):
    assert sym2.adjugate(sym2.adjugate(m)) == m
    assert sym2.inner(sym2.adjugate(m), m) == pytest.approx(2 * sym2.det(m), abs=1e-9)


@given(sym2s)
def test_isometry(m):
    n = Sym2(1.5, -0.5, 2.0)
    assert float(m.to_vec() @ n.to_vec()) == pytest.approx(sym2.inner(m, n), abs=1e-9)


@given(sym2s)
def test_norm_trace_det_identity(m):
    assert m.norm() ** 2 == pytest.approx(sym2.inner(m, Sym2.identity()) ** 2 - 2 * sym2.det(m), abs=1e-9)


@given(sym2s, sym2s)
def test_det_of_sum(m, n):
    lhs = sym2.det(n + m)
    rhs = sym2.det(n) + sym2.det(m) + sym2.inner(sym2.adjugate(m), n)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * (1 + m.norm() * n.norm()))


@given(angles, angles, finite, finite)
def test_frame_determinant(ta, tn, xi, eta):
    a = np.array([math.cos(ta), math.sin(ta)])
    n = np.array([math.cos(tn), math.sin(tn)])
    m = xi * Sym2.outer(sym2.perp(a)) + eta * Sym2.outer(sym2.perp(n))
    assert sym2.det(m) == pytest.approx(xi * eta * sym2.cross2(a, n) ** 2, abs=1e-9)


@given(sym2s)
def test_rank_one_decompose_reconstructs(q):
    if sym2.det(q) > 0:
        q = Sym2(q.xx, -q.yy, q.xy)
    split = sym2.rank_one_decompose(q)
    assert split.nu >= 0
    assert (_reconstruct(split) - q).norm() <= 1e-10 * max(q.norm(), 1e-300) + 1e-15
    nperp = sym2.perp(split.n)
    expected = -split.nu**2 * float(split.a @ nperp) ** 2 / 4
    assert sym2.det(q) == pytest.approx(expected, rel=1e-9, abs=1e-12 * max(1.0, q.norm() ** 2))


@settings(max_examples=300)
@given(sym2s, sym2s)
def test_compat_matches_cone(m, n):
    kind = sym2.compat(m, n).kind
    side = sym2.cone_membership(m, n)
    expected = {
        CompatKind.INCOMPATIBLE: ConeSide.INTERIOR,
        CompatKind.RANK_ONE: ConeSide.BOUNDARY,
        CompatKind.COMPATIBLE: ConeSide.EXTERIOR,
    }
    assert side is expected[kind]


@given(angles, finite, finite, st.floats(min_value=0.0, max_value=1.0), sym2s)
def test_minus_det_convex_on_rank_one_segments(theta, s, t, lam, b):
    # A - B rank-one: -det is then affine along the segment, so convexity holds with equality
    u = np.array([math.cos(theta), math.sin(theta)])
    a = b + (s - t) * Sym2.outer(u)
    mid = lam * a + (1 - lam) * b
    assert -sym2.det(mid) <= -lam * sym2.det(a) - (1 - lam) * sym2.det(b) + 1e-10 * (1 + a.norm() ** 2 + b.norm() ** 2)


@given(sym2s, sym2s, st.floats(min_value=0.0, max_value=1.0))
def test_minus_det_convex_on_compatible_segments(a, b, lam):
    if sym2.det(a - b) > 0:
        return
    mid = lam * a + (1 - lam) * b
    assert -sym2.det(mid) <= -lam * sym2.det(a) - (1 - lam) * sym2.det(b) + 1e-10 * (1 + a.norm() ** 2 + b.norm() ** 2)
