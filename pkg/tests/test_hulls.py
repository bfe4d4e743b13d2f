import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triwell import sym2
from triwell.errors import DegeneratePlane, RankOnePresent, WrongClass
from triwell.hulls import (
    HullStatus,
    Point,
    Segment,
    Triangle,
    WellKind,
    WellSet,
    bound_matrix_c,
    classify,
    convex_hull_region,
    hbar,
    lamination_hull,
    outer_bound,
    quasiconvex_hull,
    region_contains,
    component_h,
)
from triwell.sym2 import Sym2
from triwell.verify.campaign import _equivariance, _hidden_h_mismatches, _labeling
from triwell.verify.generators import generate

D = Sym2.diag
V1, V2, V3 = D(1, -1), D(0, 1), D(-1, 0)


def test_classify_type_two(type_two_wells):
    wc = classify(type_two_wells)
    assert wc.kind is WellKind.TYPE_TWO
    assert wc.perm[0] == 0 and set(wc.perm[1:]) == {1, 2}
    assert wc.rank_one_pairs == ()
    assert wc.dets == pytest.approx((-2, -2, 1))


def test_classify_type_one(type_one_wells):
    wc = classify(type_one_wells)
    assert wc.kind is WellKind.TYPE_ONE
    assert wc.perm[0] == 0
    assert wc.dets == pytest.approx((2, 2, -1))


def test_classify_all_compatible(all_compatible_wells):
    wc = classify(all_compatible_wells)
    assert wc.kind is WellKind.ALL_COMPATIBLE
    assert set(wc.rank_one_pairs) == {(0, 1), (0, 2)}


def test_classify_all_incompatible_and_degenerate(all_incompatible_wells):
    assert classify(all_incompatible_wells).kind is WellKind.ALL_INCOMPATIBLE
    # diag(2, -2) is compatible, so this triple is type one
    assert classify([D(0, 0), D(3, 1), D(1, 3)]).kind is WellKind.TYPE_ONE
    assert classify([D(0, 0), D(1, 0), D(2, 0)]).kind is WellKind.DEGENERATE_SPAN
    assert classify([D(0, 0), D(0, 0), D(1, 2)]).kind is WellKind.DEGENERATE_SPAN


def test_lamination_hull_type_two(type_two_wells):
    hull = lamination_hull(WellSet(type_two_wells))
    assert len(hull.pieces) == 2 and all(isinstance(p, Triangle) for p in hull.pieces)
    verts = [set(map(tuple, sym2.stack(p.vertices).round(12))) for p in hull.pieces]
    assert {(1.0, 0.0, 0.0), (2.0, -1.0, 0.0), (1.0, 1.0, 0.0)} in verts
    assert {(1.0, 0.0, 0.0), (2.0, -1.0, 0.0), (0.0, 0.0, 0.0)} in verts


def test_lamination_hull_type_one(type_one_wells):
    hull = lamination_hull(WellSet(type_one_wells))
    point, seg = hull.pieces
    assert isinstance(point, Point) and point.p == D(1, 1)
    assert isinstance(seg, Segment) and {seg.a, seg.b} == {D(0, -1), D(-1, 0)}


def test_lamination_hull_other_kinds(all_incompatible_wells, all_compatible_wells):
    hull = lamination_hull(WellSet(all_incompatible_wells))
    assert len(hull.pieces) == 3 and all(isinstance(p, Point) for p in hull.pieces)
    hull = lamination_hull(WellSet(all_compatible_wells))
    assert len(hull.pieces) == 1 and isinstance(hull.pieces[0], Triangle)
    with pytest.raises(WrongClass):
        lamination_hull(WellSet([D(0, 0), D(1, 0), D(2, 0)]))


def test_bound_matrix_fixture():
    c = bound_matrix_c(V1, V2, V3)
    assert c.isclose(D(-1, 1), 1e-14)
    assert sym2.inner(c, V2) == pytest.approx(1, abs=1e-12)
    assert sym2.inner(c, V3) == pytest.approx(1, abs=1e-12)
    assert sym2.inner(c, V1) == pytest.approx(-2, abs=1e-12)
    assert sym2.det(c) == pytest.approx(-1)
    assert bound_matrix_c(V1, V3, V2).isclose(c, 1e-14)
    with pytest.raises(DegeneratePlane):
        bound_matrix_c(D(0, 0), D(1, 0), D(2, 0))


def test_hbar_fixture():
    c = D(-1, 1)
    assert hbar(V1, V1, V2, c) == pytest.approx(0)
    assert hbar(D(0, 0), V1, V2, c) == pytest.approx(1)
    assert hbar(V3, V1, V2, c) == pytest.approx(0)


def test_outer_bound_type_two(type_two_wells):
    ob = outer_bound(WellSet(type_two_wells))
    assert ob.c.isclose(D(-1, 1), 1e-14)
    assert ob.u0.isclose(D(1, 0), 1e-14)
    assert ob.frame_coords == pytest.approx((-1, 1, 1, -1))
    assert ob.h_coeffs == pytest.approx((3, -1, 1, 1))
    xi, eta, gamma, zeta = ob.frame_coords
    for x, y in [(-1, 1), (1, 0), (0, -1), (0.3, -0.2)]:
        a, b, d, e = ob.h_coeffs
        assert a * x * y + b * x + d * y + e == pytest.approx(component_h(x, y, xi, eta, gamma, zeta))
    for u in type_two_wells:
        assert ob.region.contains(u)


def test_outer_bound_type_one(type_one_wells):
    ws = WellSet(type_one_wells)
    ob = outer_bound(ws)
    assert ob.u0.isclose(D(0, 0), 1e-14)
    assert ob.c.isclose(D(-1, -1), 1e-14)
    xi, eta, gamma, zeta = ob.frame_coords
    a, b, d, e = ob.h_coeffs
    # for type one the component form is the negative of the quadratic bound
    assert component_h(0.0, 0.0, xi, eta, gamma, zeta) == pytest.approx(-e)
    for u in type_one_wells:
        assert ob.region.contains(u)


def test_outer_bound_errors(rank_one_type_one_wells, all_compatible_wells):
    with pytest.raises(RankOnePresent):
        outer_bound(WellSet(rank_one_type_one_wells))
    with pytest.raises(WrongClass):
        outer_bound(WellSet(all_compatible_wells))


def test_quasiconvex_statuses(type_two_wells, rank_one_type_one_wells, all_compatible_wells, all_incompatible_wells):
    assert quasiconvex_hull(WellSet(type_two_wells)).status is HullStatus.BOUND_ONLY
    res = quasiconvex_hull(WellSet(rank_one_type_one_wells))
    assert res.status is HullStatus.EXACT_EQUALS_LAMINATION and res.inner is res.outer
    assert quasiconvex_hull(WellSet(all_compatible_wells)).status is HullStatus.EXACT_CONVEX
    assert quasiconvex_hull(WellSet(all_incompatible_wells)).status is HullStatus.EXACT_WELLS
    with pytest.raises(WrongClass):
        quasiconvex_hull(WellSet([D(0, 0), D(1, 0), D(2, 0)]))


def test_inner_inside_outer_on_fixture(type_two_wells, rng):
    res = quasiconvex_hull(WellSet(type_two_wells))
    for piece in res.inner.pieces:
        pts = rng.dirichlet(np.ones(3), 2000) @ sym2.stack(piece.vertices)
        assert res.outer.contains_array(pts).all()


def test_region_contains_examples(type_two_wells, type_one_wells):
    assert region_contains(lamination_hull(WellSet(type_two_wells)), D(1, 0))
    hull = lamination_hull(WellSet(type_one_wells))
    assert region_contains(hull, 0.5 * (D(0, -1) + D(-1, 0)))
    assert not region_contains(hull, 0.5 * (D(1, 1) + D(0, -1)))


def test_region_translate_and_scale(type_two_wells):
    res = quasiconvex_hull(WellSet(type_two_wells))
    m0 = D(5, -3)
    moved = res.outer.translated(m0)
    assert moved.contains(D(1, 0) + m0) and not moved.contains(D(1.5, -0.25) + m0 + D(0, 0.5))
    big = res.outer.scaled(2.0)
    assert big.contains(D(2, 0))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["type_one", "type_two"]))
def test_wells_on_gamma_and_inner_in_outer(seed, kind):
    rng = np.random.default_rng(seed)
    ws = WellSet(generate(kind, rng))
    res = quasiconvex_hull(ws)
    c = res.bound.c
    v1, v2, v3 = (u - ws.u0 for u in ws.labeled)
    for v in (v1, v2, v3):
        assert abs(hbar(v, v1, v2, c)) <= 1e-9 * ws.scale**3
    pts = np.vstack([rng.dirichlet(np.ones(len(p.vertices)), 500) @ sym2.stack(p.vertices) for p in res.inner.pieces])
    assert res.outer.contains_array(pts).all()
    sample = rng.dirichlet(np.ones(3), 2000) @ sym2.stack(ws.labeled)
    inside_outer = res.outer.contains_array(sample)
    assert convex_hull_region(ws).contains_array(sample[inside_outer]).all()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["type_one", "type_two"]))
def test_component_form_is_a_multiple_of_hbar(seed, kind):
    # positive multiple for type two, negative for type one, so both regions read as stated
    rng = np.random.default_rng(seed)
    ob = outer_bound(WellSet(generate(kind, rng)))
    a, b, d, e = ob.h_coeffs
    pts = rng.normal(size=(6, 2))
    ratio = np.array([component_h(x, y, *ob.frame_coords) / (a * x * y + b * x + d * y + e) for x, y in pts])
    assert np.ptp(ratio) <= 1e-8 * np.abs(ratio).max()
    assert (ratio > 0).all() if kind == "type_two" else (ratio < 0).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["type_one", "type_two"]))
def test_hbar_sign_matches_weighted_determinant(seed, kind):
    rng = np.random.default_rng(seed)
    ws = WellSet(generate(kind, rng))
    assert _hidden_h_mismatches(ws, rng.dirichlet(np.ones(3), 2000)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["type_one", "type_two", "all_compatible", "all_incompatible", "rank_one_type_one", "rank_one_type_two"]))
def test_labeling_and_affine_equivariance(seed, kind):
    rng = np.random.default_rng(seed)
    ws = WellSet(generate(kind, rng))
    assert _labeling(ws, rng)
    assert _equivariance(ws, rng)


@pytest.mark.parametrize("perm", [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)])
def test_all_relabelings_of_fixture(type_two_wells, perm):
    wells = [type_two_wells[i] for i in perm]
    wc = classify(wells)
    assert wc.kind is WellKind.TYPE_TWO
    assert wells[wc.perm[0]] == D(2, -1)
    assert outer_bound(WellSet(wells)).c.isclose(D(-1, 1), 1e-14)
