"""Barycentric grids on the triangle spanned by three wells."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..sym2 import stack


def row_offsets(n: int) -> np.ndarray:
    i = np.arange(n + 2)
    return i * (n + 1) - i * (i - 1) // 2


@dataclass
class BaryGrid:
    """Points (i, j, k) / N with i + j + k = N, ordered by i then j.

    ``idx[:, m]`` is the integer weight of well m (in the labeling the grid was
    built for), so the grid point is ``sum_m idx[:, m] / N * U_m``.
    """

    resolution: int
    idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.resolution)
        if n < 1:
            raise ValueError("grid resolution must be positive")
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        keep = i + j <= n
        i, j = i[keep], j[keep]
        self.idx = np.column_stack([i, j, n - i - j]).astype(np.int64)

    def __len__(self) -> int:
        return len(self.idx)

    @property
    def points(self) -> np.ndarray:
        return self.idx / self.resolution

    def index_of(self, i: int, j: int) -> int:
        return int(row_offsets(self.resolution)[i] + j)

    def vertex_indices(self) -> tuple:
        n = self.resolution
        return self.index_of(n, 0), self.index_of(0, n), self.index_of(0, 0)

    def matrices(self, wells) -> np.ndarray:
        """Grid points as an (M, 3) array of (xx, yy, xy) components."""
        return self.points @ stack(wells)

    def plane_coords(self) -> np.ndarray:
        """(theta2, theta3), the metric used for boundary bands."""
        return self.points[:, 1:]


@dataclass
class GridField:
    grid: BaryGrid
    values: dict

    def __getitem__(self, key):
        return self.values[key]

