"""Randomized campaigns and single-set oracle reports.

Everything here is deterministic given the seed; reports hold no timings so
two runs serialize to the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .. import plane as pg
from .. import sym2
from ..errors import TriwellError
from ..hulls import (
    HullStatus,
    WellKind,
    WellSet,
    bound_matrix_c,
    classify,
    convex_hull_region,
    hbar,
    lamination_hull,
    quasiconvex_hull,
)
from ..sym2 import Sym2
from .bands import band_compare, inclusion_compare
from .biconjugate import (
    DualRect,
    PenaltySpec,
    biconjugate,
    biconjugate_array,
    biconjugate_translated,
    kernel_field,
    make_penalty,
    sup_lagrangian,
    sup_lagrangian_sampled,
    translation_check,
)
from .generators import GENERATORS, generate, random_sym
from .grid import BaryGrid
from .lamination import lamination_fixed_point

DIVERGENCE_CAP = 1e6  # times scale^2
LINEAR_RADIUS = 1e8  # times scale, for directions where the Lagrangian grows linearly

EXPECTED_KIND = {
    "type_one": WellKind.TYPE_ONE,
    "type_two": WellKind.TYPE_TWO,
    "all_compatible": WellKind.ALL_COMPATIBLE,
    "all_incompatible": WellKind.ALL_INCOMPATIBLE,
    "rank_one_type_one": WellKind.TYPE_ONE,
    "rank_one_type_two": WellKind.TYPE_TWO,
}

EXPECTED_STATUS = {
    "type_one": HullStatus.BOUND_ONLY,
    "type_two": HullStatus.BOUND_ONLY,
    "all_compatible": HullStatus.EXACT_CONVEX,
    "all_incompatible": HullStatus.EXACT_WELLS,
    "rank_one_type_one": HullStatus.EXACT_EQUALS_LAMINATION,
    "rank_one_type_two": HullStatus.EXACT_EQUALS_LAMINATION,
}


def set_rng(seed: int, kind: str, index: int) -> np.random.Generator:
    """Generator for one well set; (seed, kind, index) replays it exactly."""
    return np.random.default_rng([seed, list(GENERATORS).index(kind), index])


def simplex_samples(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.dirichlet(np.ones(3), size=count)


# -- oracle report for one set --------------------------------------------


def _grid_wells(ws: WellSet) -> list:
    return list(ws.labeled)


def lamination_report(ws: WellSet, n: int, lsteps: int) -> dict:
    wells = _grid_wells(ws)
    field = lamination_fixed_point(wells, n, lsteps, ws.tol if ws.tol is not None else sym2.TOL_REL)
    res = band_compare(lamination_hull(ws), wells, field.grid, field["in_hull"], 2.0 / n)
    res.update(marked=int(field["in_hull"].sum()), rounds=field["rounds"])
    return res


def kernel_report(ws: WellSet, spec: PenaltySpec, n: int) -> dict:
    """L^e => kernel => outer region on the grid, each up to one cell."""
    wells = _grid_wells(ws)
    grid = BaryGrid(n)
    kf = kernel_field(spec, grid)
    kernel = kf["in_kernel"]
    inner_region = lamination_hull(ws)
    qc = quasiconvex_hull(ws)
    width = math.sqrt(2.0) / n
    comps = grid.matrices(wells)
    inner = inner_region.contains_array(comps)
    outer = qc.outer.contains_array(comps)
    lower = inclusion_compare(inner, kernel, [inner_region], wells, grid, width)
    upper = inclusion_compare(kernel, outer, [qc.outer], wells, grid, width)
    return {
        "route": spec.route,
        "kernel_size": int(kernel.sum()),
        "inner_size": int(inner.sum()),
        "outer_size": int(outer.sum()),
        "lamination_in_kernel": lower,
        "kernel_in_outer": upper,
        "necessary_conditions": bool(kf["conditions_ok"].all()),
        "min_fpp": float(kf["fpp"].min()),
        "passed": bool(lower["passed"] and upper["passed"]),
    }


def _translation_report(spec: PenaltySpec, grid: BaryGrid, wells, rng: np.random.Generator) -> dict:
    comps = grid.matrices(wells)
    # uncentered route: penalty translated by U0 evaluated at the original wells
    back = translation_check(spec, spec.center, comps)
    shift = 5.0 * spec.scale * random_sym(rng, 1.0)
    moved = translation_check(spec, shift, comps - spec.center.components() + shift.components())
    fpp_uncentered = biconjugate_translated(spec, spec.center, comps)
    return {
        "to_center": back,
        "random_shift": moved,
        "min_fpp_uncentered": float(fpp_uncentered.min()),
        "passed": bool(back["passed"] and moved["passed"]),
    }


def _divergent_duals(spec: PenaltySpec, rng: np.random.Generator) -> list:
    """Dual points outside N: (V*, d*, radius) with the radius their growth rate needs."""
    c = spec.c
    w = random_sym(rng, 1.0)
    w = w - (sym2.inner(w, c) / sym2.inner(c, c)) * c
    w = w / w.norm()
    scale = spec.scale
    k = float(rng.uniform(-0.9, 0.9))
    d = float(rng.uniform(-3.0, -1.1))
    # growth is (|d| - 1) |det U| <= (|d| - 1) r^2 / 2, so the radius must clear the cap
    quad_radius = max(1e3 * scale, math.sqrt(8.0 * DIVERGENCE_CAP / (abs(d) - 1.0)) * scale)
    return [
        ("d_below_minus_one", k * c, d, quad_radius),
        ("k_above_one", float(rng.choice([-1.0, 1.0]) * rng.uniform(1.1, 2.0)) * c, -0.5, LINEAR_RADIUS * scale),
        ("not_parallel_to_c", k * c + 0.5 * w, -0.5, LINEAR_RADIUS * scale),
    ]


def sup_report(spec: PenaltySpec, rng: np.random.Generator, count: int = 4, samples: int = 4000) -> dict:
    """Sampled sup of the Lagrangian against the closed form inside N, and divergence outside."""
    rect = DualRect()
    worst = 0.0
    kd = [(1.0, 0.0), (-1.0, -1.0)] + [(rng.uniform(-1, 1), rng.uniform(-1, 0)) for _ in range(count)]
    tol = 1e-9 * spec.scale**2
    inside_ok = True
    for k, d in kd:
        closed = sup_lagrangian(float(k), float(d), spec, rect)
        sampled = sup_lagrangian_sampled(float(k) * spec.c, float(d), spec, rng, samples)
        # anchors are sampled, so sampled >= closed; the closed form must not be beaten
        worst = max(worst, sampled - closed)
        inside_ok &= abs(sampled - closed) <= tol
    cap = DIVERGENCE_CAP * spec.scale**2
    outside = {}
    for name, vstar, d, radius in _divergent_duals(spec, rng):
        val = sup_lagrangian_sampled(vstar, d, spec, rng, samples, radius)
        outside[name] = bool(val > cap)
    return {
        "inside_max_excess": float(worst),
        "inside_passed": bool(inside_ok),
        "outside_diverges": outside,
        "passed": bool(inside_ok and all(outside.values())),
    }


def oracle_report(wells: Sequence[Sym2], n: int = 100, lsteps: int = 64, seed: int = 0, tol: Optional[float] = None) -> dict:
    """All oracles for one well set.  Sections that do not apply are None."""
    ws = WellSet(wells, tol)
    ws.require_plane()
    rng = np.random.default_rng(seed)
    qc = quasiconvex_hull(ws)
    out: dict = {
        "kind": ws.wclass.kind.value,
        "status": qc.status.value,
        "grid": n,
        "lambda_steps": lsteps,
        "seed": seed,
        "lamination": lamination_report(ws, n, lsteps),
        "kernel": None,
        "translation": None,
        "sup_lagrangian": None,
    }
    if ws.wclass.kind in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        spec = make_penalty(ws)
        out["kernel"] = kernel_report(ws, spec, n)
        out["translation"] = _translation_report(spec, BaryGrid(n), _grid_wells(ws), rng)
        out["sup_lagrangian"] = sup_report(spec, rng)
        out["min_fpp_over_scale"] = min(out["kernel"]["min_fpp"], out["translation"]["min_fpp_uncentered"]) / spec.scale
    parts = [out[k] for k in ("lamination", "kernel", "translation", "sup_lagrangian") if out[k] is not None]
    out["passed"] = all(p["passed"] for p in parts)
    return out


# -- property campaign ----------------------------------------------------


@dataclass
class CampaignConfig:
    seed: int = 42
    sets: int = 100
    samples: int = 500
    fuzz: int = 200
    oracle_sets: int = 2
    grid: int = 40
    lambda_steps: int = 32


class _Suite:
    def __init__(self):
        self.checked = 0
        self.failures: list = []

    def record(self, ok: bool, tag: tuple) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(list(tag))

    def report(self, keep: int = 20) -> dict:
        return {"checked": self.checked, "failed": len(self.failures), "failures": self.failures[:keep]}


def _frame_pattern(ws: WellSet) -> bool:
    """Sign pattern of the centered frame coordinates for strict sets."""
    frame = ws.frame
    v1, v2, v3 = (u - ws.u0 for u in ws.labeled)
    c1 = np.array(pg.to_plane_coords(v1, Sym2.zero(), frame))
    c2 = np.array(pg.to_plane_coords(v2, Sym2.zero(), frame))
    c3 = np.array(pg.to_plane_coords(v3, Sym2.zero(), frame))
    ax2 = int(np.argmax(np.abs(c2)))
    ax3 = int(np.argmax(np.abs(c3)))
    if ax2 == ax3:
        return False
    g, z = c2[ax2], c3[ax3]
    p, q = c1[ax2], c1[ax3]
    if ws.wclass.kind is WellKind.TYPE_TWO:
        return g * z < 0 and p * g <= 0 and q * z <= 0
    return g * z > 0 and p * g < 0 and q * z < 0


def _hidden_h_mismatches(ws: WellSet, theta: np.ndarray) -> int:
    v = [u - ws.u0 for u in ws.labeled]
    c = bound_matrix_c(*v)
    comps = theta @ sym2.stack(v)
    det_v = sym2.det_array(comps)
    d1 = sym2.det(v[0])
    h = (sym2.inner_array(comps, c) - sym2.inner(c, v[1])) * d1 - sym2.inner(c, v[0] - v[1]) * det_v
    g = det_v - theta[:, 0] * d1
    shell = 1e-9 * ws.scale**3
    # compare signs only where both quantities are clear of the tolerance shell
    clear = (np.abs(h) > shell) & (np.abs(g) * abs(sym2.inner(c, v[0] - v[1])) > shell)
    return int(np.sum(clear & ((h >= 0) != (g >= 0))))


def _region_vertices_match(a, b, atol: float) -> bool:
    va, vb = a.vertices(), b.vertices()
    return len(va) == len(vb) and all(any(x.isclose(y, atol) for y in vb) for x in va)


def _equivariance(ws: WellSet, rng: np.random.Generator) -> bool:
    base = quasiconvex_hull(ws)
    atol = 1e-9 * ws.scale
    m0 = random_sym(rng, 5.0)
    s = float(rng.uniform(0.1, 10.0))
    moved = quasiconvex_hull(WellSet([u + m0 for u in ws.wells], ws.tol))
    scaled = quasiconvex_hull(WellSet([s * u for u in ws.wells], ws.tol))
    ok = moved.status is base.status and scaled.status is base.status
    ok &= _region_vertices_match(moved.inner, base.inner.translated(m0), atol)
    ok &= _region_vertices_match(moved.outer, base.outer.translated(m0), atol)
    ok &= _region_vertices_match(scaled.inner, base.inner.scaled(s), s * atol)
    ok &= _region_vertices_match(scaled.outer, base.outer.scaled(s), s * atol)
    return bool(ok)


def _labeling(ws: WellSet, rng: np.random.Generator) -> bool:
    perm = rng.permutation(3)
    other = classify([ws.wells[i] for i in perm], ws.tol)
    if other.kind is not ws.wclass.kind:
        return False
    if ws.wclass.kind in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        # U1 is the distinguished well in either labeling
        return ws.wells[ws.wclass.perm[0]] == ws.wells[perm[other.perm[0]]]
    return True


def _inner_in_outer(ws: WellSet, qc, rng: np.random.Generator, count: int) -> bool:
    pts = []
    for piece in qc.inner.pieces:
        verts = sym2.stack(piece.vertices)
        pts.append(rng.dirichlet(np.ones(len(verts)), size=count) @ verts)
    pts = np.vstack(pts)
    hull = convex_hull_region(ws)
    outer_pts = simplex_samples(rng, count) @ sym2.stack(ws.labeled)
    in_outer = qc.outer.contains_array(outer_pts)
    return bool(qc.outer.contains_array(pts).all() and hull.contains_array(outer_pts[in_outer]).all())


def _set_checks(kind: str, index: int, cfg: CampaignConfig, suites: dict, state: dict) -> None:
    rng = set_rng(cfg.seed, kind, index)
    wells = generate(kind, rng)
    tag = (kind, index)
    ws = WellSet(wells)
    wc = ws.wclass
    expected_strict = kind in ("type_one", "type_two")
    suites["class"].record(wc.kind is EXPECTED_KIND[kind] and (wc.strict or not expected_strict), tag)
    qc = quasiconvex_hull(ws)
    suites["status"].record(qc.status is EXPECTED_STATUS[kind], tag)
    suites["labeling"].record(_labeling(ws, rng), tag)
    suites["equivariance"].record(_equivariance(ws, rng), tag)
    suites["inner_in_outer"].record(_inner_in_outer(ws, qc, rng, cfg.samples), tag)
    if wc.kind not in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
        return
    suites["det_q_negative"].record(sym2.det(ws.plane.normal) < 0, tag)
    r = ws.u0_result
    u2, u3 = ws.labeled[1:]
    tol2 = 1e-9 * ws.scale**2
    suites["u0_rank_one"].record(
        r.inside and abs(sym2.det(r.u0 - u2)) <= tol2 and abs(sym2.det(r.u0 - u3)) <= tol2, tag
    )
    spec = make_penalty(ws)
    comps = simplex_samples(rng, cfg.samples) @ sym2.stack(spec.wells)
    fpp = biconjugate_array(spec, np.vstack([comps, sym2.stack(spec.wells)]))
    state["min_fpp_over_scale"] = min(state["min_fpp_over_scale"], float(fpp.min()) / spec.scale)
    suites["fpp_nonnegative"].record(fpp.min() >= -1e-9 * spec.scale, tag)
    suites["wells_in_kernel"].record(bool(np.all(fpp[-3:] <= 1e-7 * spec.scale**3)), tag)
    if not wc.strict:
        return
    suites["frame_sign_pattern"].record(_frame_pattern(ws), tag)
    v1, v2, v3 = (u - ws.u0 for u in ws.labeled)
    c = qc.bound.c
    shell = 1e-9 * ws.scale**3
    suites["wells_on_gamma"].record(all(abs(hbar(v, v1, v2, c)) <= shell for v in (v1, v2, v3)), tag)
    suites["hidden_h"].record(_hidden_h_mismatches(ws, simplex_samples(rng, cfg.samples)) == 0, tag)


def _fuzz(index: int, cfg: CampaignConfig, suites: dict) -> None:
    rng = np.random.default_rng([cfg.seed, len(GENERATORS), index])
    wells = generate("near_degenerate", rng)
    ok = True
    try:
        ws = WellSet(wells)
        quasiconvex_hull(ws)
        if ws.wclass.kind in (WellKind.TYPE_ONE, WellKind.TYPE_TWO):
            spec = make_penalty(ws)
            ok = math.isfinite(biconjugate(Sym2.zero(), spec))
    except TriwellError:
        pass
    except Exception:  # noqa: BLE001 - the suite counts anything else as a crash
        ok = False
    suites["fuzz_no_crash"].record(ok, ("near_degenerate", index))


def _oracle_checks(kind: str, index: int, cfg: CampaignConfig, suites: dict, state: dict) -> None:
    rng = set_rng(cfg.seed, kind, index)
    wells = generate(kind, rng)
    rep = oracle_report(wells, cfg.grid, cfg.lambda_steps, seed=cfg.seed)
    tag = (kind, index)
    suites["lamination_band"].record(rep["lamination"]["passed"], tag)
    if rep["kernel"] is not None:
        suites["lamination_in_kernel"].record(rep["kernel"]["lamination_in_kernel"]["passed"], tag)
        suites["kernel_in_outer"].record(rep["kernel"]["kernel_in_outer"]["passed"], tag)
        suites["translation"].record(rep["translation"]["passed"], tag)
        suites["sup_lagrangian"].record(rep["sup_lagrangian"]["passed"], tag)
        state["min_fpp_over_scale"] = min(state["min_fpp_over_scale"], rep["min_fpp_over_scale"])


SUITES = (
    "class",
    "status",
    "labeling",
    "equivariance",
    "inner_in_outer",
    "det_q_negative",
    "u0_rank_one",
    "frame_sign_pattern",
    "wells_on_gamma",
    "hidden_h",
    "fpp_nonnegative",
    "wells_in_kernel",
    "fuzz_no_crash",
    "lamination_band",
    "lamination_in_kernel",
    "kernel_in_outer",
    "translation",
    "sup_lagrangian",
)


def property_campaign(config: CampaignConfig | None = None, kinds: Sequence[str] | None = None) -> dict:
    """Run the generator-driven suites; failures are listed as (kind, index) for replay."""
    cfg = config or CampaignConfig()
    kinds = list(kinds or EXPECTED_KIND)
    suites = {name: _Suite() for name in SUITES}
    state = {"min_fpp_over_scale": math.inf}
    for kind in kinds:
        for i in range(cfg.sets):
            _set_checks(kind, i, cfg, suites, state)
        for i in range(cfg.oracle_sets):
            _oracle_checks(kind, i, cfg, suites, state)
    for i in range(cfg.fuzz):
        _fuzz(i, cfg, suites)
    report = {name: s.report() for name, s in suites.items()}
    return {
        "config": asdict(cfg),
        "kinds": kinds,
        "suites": report,
        "min_fpp_over_scale": state["min_fpp_over_scale"] if math.isfinite(state["min_fpp_over_scale"]) else None,
        "passed": all(s["failed"] == 0 for s in report.values()),
    }
