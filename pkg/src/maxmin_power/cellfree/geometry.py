import math
from dataclasses import dataclass

import numpy as np

from ._rng import generator

__all__ = ["NetworkGeometry", "make_geometry"]


@dataclass(frozen=True, eq=False)
class NetworkGeometry:
    """AP grid and UE drop inside a square service area (meters)."""

    L: int
    M_ant: int
    K: int
    area_side: float
    ap_positions: np.ndarray  # (L, 2)
    ue_positions: np.ndarray  # (K, 2)
    height_diff: float = 10.0

    def distances(self):
        """3-D AP-UE distances, shape (L, K)."""
        diff = self.ap_positions[:, None, :] - self.ue_positions[None, :, :]
        return np.sqrt(np.sum(diff**2, axis=-1) + self.height_diff**2)


def make_geometry(L, M_ant, K, area_side=1000.0, seed=None, height_diff=10.0):
    """
    APs at the centers of a ``sqrt(L) x sqrt(L)`` partition of the square,
    UEs i.i.d. uniform over it.
    """
    side = math.isqrt(L)
    if side * side != L:
        raise ValueError(f"L={L} is not a perfect square")
    if min(L, M_ant, K) < 1:
        raise ValueError("L, M_ant and K must be at least 1")
    pitch = area_side / side
    centers = pitch * (np.arange(side) + 0.5)
    gx, gy = np.meshgrid(centers, centers, indexing="ij")
    ap = np.column_stack([gx.ravel(), gy.ravel()])
    ue = generator(seed).uniform(0.0, area_side, size=(K, 2))
    return NetworkGeometry(L, M_ant, K, float(area_side), ap, ue, float(height_diff))
