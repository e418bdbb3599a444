"""Upper bound on the optimal utility as a function of the power budget."""

from dataclasses import dataclass

import numpy as np

from .perron import spectral_radius

__all__ = ["UtilityBound", "compute_bound", "regime", "REGIME_MARGIN"]

# one decade either side of the transition point
REGIME_MARGIN = 10.0


@dataclass(frozen=True)
class UtilityBound:
    """
    Piecewise bound ``min(p_max / u_norm, 1 / rho_M)``.

    ``u_norm`` is ``max_n a_n^T u`` (no ``1/p_max`` factor) and
    ``p_T = u_norm / rho_M`` is where the two branches meet. With
    ``rho_M == 0`` only the noise-limited branch exists and ``p_T`` is
    infinite. ``rho_certified`` is false when power iteration stalled on a
    reducible ``M`` and the radius came from a dense eigensolve instead.
    """

    rho_M: float
    u_norm: float
    p_T: float
    rho_certified: bool = True

    @property
    def noise_limited_only(self):
        return self.rho_M == 0

    def bound(self, p_max):
        p_max = np.asarray(p_max, dtype=float)
        lin = p_max / self.u_norm
        if self.rho_M == 0:
            out = lin
        else:
            out = np.where(p_max >= self.p_T, 1.0 / self.rho_M, lin)
        return float(out) if out.ndim == 0 else out

    __call__ = bound


def compute_bound(sp, tol=1e-12):
    res = spectral_radius(sp.M, tol=tol)
    rho = res.rho
    if not res.certified:
        # reducible M: power iteration may stall, fall back to a dense solve
        dense = float(np.max(np.abs(np.linalg.eigvals(sp.M))))
        rho = float(np.clip(dense, res.lo, res.hi))
    u_norm = float(np.max(sp.A.T @ sp.u))
    p_T = u_norm / rho if rho > 0 else np.inf
    return UtilityBound(rho, u_norm, p_T, res.certified)


def regime(sp, p_max, bound=None):
    """Classify ``p_max`` as noise limited, interference limited or transition."""
    b = compute_bound(sp) if bound is None else bound
    if b.rho_M == 0 or p_max < b.p_T / REGIME_MARGIN:
        return "noise_limited"
    if p_max > b.p_T * REGIME_MARGIN:
        return "interference_limited"
    return "transition"
