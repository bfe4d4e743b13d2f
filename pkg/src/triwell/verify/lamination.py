"""Brute-force lamination closure on a barycentric grid.

Starting from the three wells, every compatible pair of marked grid points
marks the grid points nearest to ``l/L * A + (1 - l/L) * B`` for
``l = 1 .. L-1``, until nothing changes.  Rounds are bulk synchronous and
semi-naive: a pair is sampled once, in the round where its later member is
new.

Snapping is bookkeeping only: each mark keeps the exact laminate that first
reached it and further laminations start from that point, so rounding never
feeds back into the closure.
"""

from __future__ import annotations

from typing import Sequence

import numba
import numpy as np

from .. import sym2
from ..sym2 import Sym2
from .grid import BaryGrid, GridField, row_offsets


@numba.njit(cache=True, nogil=True, inline="always")
def _snap(pi, pj, pk, n):
    """Nearest lattice point: round each weight, then repair the sum."""
    # weights are non-negative, so truncation of x + 1/2 rounds to nearest
    ri = int(pi + 0.5)
    rj = int(pj + 0.5)
    rk = int(pk + 0.5)
    s = ri + rj + rk - n
    if s > 0:
        # drop the coordinate rounded up the most
        ei, ej, ek = ri - pi, rj - pj, rk - pk
        if ei >= ej and ei >= ek:
            ri -= 1
        elif ej >= ek:
            rj -= 1
    elif s < 0:
        ei, ej, ek = pi - ri, pj - rj, pk - rk
        if ei >= ej and ei >= ek:
            ri += 1
        elif ej >= ek:
            rj += 1
    return ri, rj


@numba.njit(cache=True, nogil=True)
def _unmarked_distance(marked, I, J, off, n, dist, queue):
    """Hex (cube-coordinate) distance from each cell to the nearest unmarked cell."""
    m = I.shape[0]
    big = 1 << 30
    head = 0
    tail = 0
    for c in range(m):
        if marked[c] == 0:
            dist[c] = 0
            queue[tail] = c
            tail += 1
        else:
            dist[c] = big
    while head < tail:
        c = queue[head]
        head += 1
        i = I[c]
        j = J[c]
        for t in range(6):
            if t == 0:
                ni, nj = i + 1, j - 1
            elif t == 1:
                ni, nj = i - 1, j + 1
            elif t == 2:
                ni, nj = i + 1, j
            elif t == 3:
                ni, nj = i - 1, j
            elif t == 4:
                ni, nj = i, j + 1
            else:
                ni, nj = i, j - 1
            if ni < 0 or nj < 0 or ni + nj > n:
                continue
            nc = off[ni] + nj
            if dist[nc] > dist[c] + 1:
                dist[nc] = dist[c] + 1
                queue[tail] = nc
                tail += 1


@numba.njit(cache=True, nogil=True)
def _closure(n, lsteps, quad, tol, seeds, I, J, off):
    m = I.shape[0]
    marked = np.zeros(m, np.uint8)
    order = np.empty(m, np.int64)
    # exact laminate (grid units) that first reached each mark
    rep = np.empty((m, 2), np.float64)
    dist = np.empty(m, np.int64)
    queue = np.empty(m, np.int64)
    nmark = 0
    for s in seeds:
        if marked[s] == 0:
            marked[s] = 1
            order[nmark] = s
            rep[nmark, 0] = I[s]
            rep[nmark, 1] = J[s]
            nmark += 1
    d22, d23, d33, g22, g23, g33 = quad
    inv_n2 = 1.0 / (n * n)
    inv_l = 1.0 / lsteps
    f0 = 0
    f1 = nmark
    rounds = 0
    pairs = 0
    while f1 > f0 and nmark < m:
        rounds += 1
        # Cells unmarked now stay a superset of the unmarked cells for the
        # whole round, so dist is a valid lower bound throughout.  A sample
        # snaps at most 2/3 away (cube metric), hence a sample whose cell has
        # dist D cannot create marks within D - 4/3 of itself.
        _unmarked_distance(marked, I, J, off, n, dist, queue)
        for fi in range(f0, f1):
            ai = rep[fi, 0]
            aj = rep[fi, 1]
            ak = n - ai - aj
            for bi_ in range(fi):
                bi = rep[bi_, 0]
                bj = rep[bi_, 1]
                c2 = aj - bj
                c3 = ak - (n - bi - bj)
                det = (c2 * c2 * d22 + c2 * c3 * d23 + c3 * c3 * d33) * inv_n2
                nrm = (c2 * c2 * g22 + c2 * c3 * g23 + c3 * c3 * g33) * inv_n2
                if det > tol * max(1.0, nrm):
                    continue
                pairs += 1
                si = (ai - bi) * inv_l
                sj = (aj - bj) * inv_l
                step = max(abs(si), abs(sj), abs(si + sj))
                inv_step = 1.0 / step if step > 0.0 else 0.0
                l = 1
                while l < lsteps:
                    pi = bi + l * si
                    pj = bj + l * sj
                    ri, rj = _snap(pi, pj, n - pi - pj, n)
                    idx = off[ri] + rj
                    if marked[idx] == 0:
                        marked[idx] = 1
                        order[nmark] = idx
                        rep[nmark, 0] = pi
                        rep[nmark, 1] = pj
                        nmark += 1
                    d = dist[idx]
                    if d >= 2:
                        skip = int((d - 4.0 / 3.0) * inv_step)
                        l += max(1, skip)
                    else:
                        l += 1
        f0 = f1
        f1 = nmark
    return marked, rounds, pairs


def _quad_forms(wells: Sequence[Sym2]) -> np.ndarray:
    """Coefficients of det and |.|^2 of c2 (U2 - U1) + c3 (U3 - U1)."""
    d2, d3 = wells[1] - wells[0], wells[2] - wells[0]
    return np.array(
        [
            sym2.det(d2),
            sym2.inner(sym2.adjugate(d2), d3),
            sym2.det(d3),
            sym2.inner(d2, d2),
            2.0 * sym2.inner(d2, d3),
            sym2.inner(d3, d3),
        ]
    )


def lamination_fixed_point(
    wells: Sequence[Sym2], n: int = 100, lsteps: int = 64, tol: float = sym2.TOL_REL
) -> GridField:
    """Grid approximation of the lamination hull; ``values['in_hull']`` is boolean."""
    if lsteps < 2:
        raise ValueError("need at least two lambda steps")
    grid = BaryGrid(n)
    off = row_offsets(n)
    seeds = np.array(grid.vertex_indices(), dtype=np.int64)
    marked, rounds, pairs = _closure(
        n, lsteps, _quad_forms(wells), tol, seeds, grid.idx[:, 0].copy(), grid.idx[:, 1].copy(), off
    )
    return GridField(grid, {"in_hull": marked.astype(bool), "rounds": int(rounds), "pairs": int(pairs)})
