"""Random well sets built in the rank-one frame around a chosen U0.

Centered wells are V1 = xi E_a + eta E_n, V2 = gamma E_a, V3 = zeta E_n; the
sign pattern of (xi, eta, gamma, zeta) fixes the class.  A random frame with
|a x n| >= 0.1, a random translation and a random relabeling follow.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..sym2 import Sym2

LO, HI = 0.2, 2.0
KINDS = ("type_one", "type_two", "all_compatible", "all_incompatible", "rank_one_type_one", "rank_one_type_two")


def _mag(rng: np.random.Generator) -> float:
    return float(rng.uniform(LO, HI))


def random_frame(rng: np.random.Generator, min_cross: float = 0.1) -> tuple:
    while True:
        ta, tn = rng.uniform(0.0, math.pi, size=2)
        if abs(math.sin(ta - tn)) >= min_cross:
            break
    ap = np.array([-math.sin(ta), math.cos(ta)])
    np_ = np.array([-math.sin(tn), math.cos(tn)])
    return Sym2.outer(ap), Sym2.outer(np_)


def random_sym(rng: np.random.Generator, spread: float = 3.0) -> Sym2:
    return Sym2(*rng.uniform(-spread, spread, size=3))


def _assemble(rng, coords, shuffle: bool = True) -> list:
    e_a, e_n = random_frame(rng)
    u0 = random_sym(rng)
    wells = [u0 + x * e_a + y * e_n for x, y in coords]
    if shuffle:
        wells = [wells[i] for i in rng.permutation(3)]
    return wells


def strict_type_two(rng: np.random.Generator) -> list:
    xi, eta, gamma, zeta = -_mag(rng), _mag(rng), _mag(rng), -_mag(rng)
    return _assemble(rng, [(xi, eta), (gamma, 0.0), (0.0, zeta)])


def strict_type_one(rng: np.random.Generator) -> list:
    xi, eta, gamma, zeta = _mag(rng), _mag(rng), -_mag(rng), -_mag(rng)
    return _assemble(rng, [(xi, eta), (gamma, 0.0), (0.0, zeta)])


def rank_one_type_two(rng: np.random.Generator) -> list:
    xi, eta, gamma, zeta = -_mag(rng), _mag(rng), _mag(rng), -_mag(rng)
    mode = rng.integers(0, 5)
    if mode in (0, 1):
        xi = 0.0
    elif mode in (2, 3):
        eta = 0.0
    else:
        xi = eta = 0.0
    return _assemble(rng, [(xi, eta), (gamma, 0.0), (0.0, zeta)])


def rank_one_type_one(rng: np.random.Generator) -> list:
    # U2, U3 on one rank-one line through U0, on the same side; U1 on the other line
    g1, g2 = sorted(rng.uniform(LO, HI, size=2))
    if g2 - g1 < 0.1:
        g2 = g1 + 0.1
    sgn = 1.0 if rng.random() < 0.5 else -1.0
    eta = -sgn * _mag(rng)
    return _assemble(rng, [(0.0, eta), (sgn * g1, 0.0), (sgn * g2, 0.0)])


def _monotone(rng, same_direction: bool) -> list:
    while True:
        x = np.sort(rng.uniform(-HI, HI, size=3))
        y = np.sort(rng.uniform(-HI, HI, size=3))
        if not same_direction:
            y = y[::-1]
        gaps = np.minimum(np.diff(x), np.abs(np.diff(y)))
        area = abs((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]))
        if gaps.min() > 0.1 and area > 0.05:
            return _assemble(rng, list(zip(x, y)))


def all_compatible(rng: np.random.Generator) -> list:
    return _monotone(rng, same_direction=False)


def all_incompatible(rng: np.random.Generator) -> list:
    return _monotone(rng, same_direction=True)


def near_degenerate(rng: np.random.Generator) -> list:
    """Adversarial sets: nearly collinear, nearly coincident, badly scaled or flat-framed."""
    mode = rng.integers(0, 5)
    base = strict_type_two(rng) if rng.random() < 0.5 else strict_type_one(rng)
    eps = 10.0 ** rng.uniform(-16, -6)
    if mode == 0:
        mid = 0.5 * (base[0] + base[1])
        return [base[0], base[1], mid + eps * random_sym(rng)]
    if mode == 1:
        return [base[0], base[0] + eps * random_sym(rng), base[2]]
    if mode == 2:
        s = 10.0 ** rng.uniform(-6, 6)
        return [s * w for w in base]
    if mode == 3:
        e_a, _ = random_frame(rng)
        e_n = e_a + eps * random_sym(rng)
        u0 = random_sym(rng)
        return [u0 - e_a + e_n, u0 + e_a, u0 - e_n]
    return [base[0], base[0], base[0]]


GENERATORS: dict[str, Callable] = {
    "type_one": strict_type_one,
    "type_two": strict_type_two,
    "all_compatible": all_compatible,
    "all_incompatible": all_incompatible,
    "rank_one_type_one": rank_one_type_one,
    "rank_one_type_two": rank_one_type_two,
    "near_degenerate": near_degenerate,
}


def generate(kind: str, rng: np.random.Generator) -> list:
    return GENERATORS[kind](rng)
