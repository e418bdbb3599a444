"""
Reference solvers for the max-min problem.

Both routes avoid the closed form entirely:

* ``fixed_point_solve`` runs the normalized fixed-point iteration
  ``p <- T(p) / ||T(p)||*`` of the affine interference mapping, whose limit
  is the unique conditional eigenpair.
* ``bisection_solve`` bisects on the target utility ``t`` and decides each
  candidate by solving ``(I - tM) q = t u`` and checking the power
  constraints.

They are slow compared to the closed form and exist only to cross-check it.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bounds import compute_bound
from .perron import spectral_radius
from .problem import norm_star

__all__ = [
    "OracleReport",
    "ConvergenceWarning",
    "fixed_point_solve",
    "bisection_solve",
    "feasible_at",
    "default_bracket",
]


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class OracleReport:
    method: str
    t_star: float
    p_star: np.ndarray
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def fixed_point_solve(sp, tol=1e-13, max_iters=100_000):
    """
    Normalized fixed-point iteration of ``T(p) = M p + u``.

    ``history`` holds ``(1 / lambda_n, ||p_n||*, lo_n, hi_n)`` per step,
    where ``lambda_n = ||T(p_n)||*`` is the running eigenvalue estimate and
    ``[lo_n, hi_n]`` are the min/max of ``T(p_n) / p_n``. The bracket
    contains the limit eigenvalue and shrinks monotonically; ``lambda_n``
    itself need not be monotone.
    """
    A, p_max = sp.A, sp.p_max
    p = sp.u / norm_star(sp.u, A, p_max)
    history = []
    converged = False
    lam = np.nan
    it = 0
    for it in range(1, max_iters + 1):
        Tp = sp.mapping(p)
        lam = norm_star(Tp, A, p_max)
        p_next = Tp / lam
        q = Tp / p
        history.append((1.0 / lam, norm_star(p, A, p_max), q.min(), q.max()))
        step = np.max(np.abs(p_next - p))
        p = p_next
        if step <= tol * np.max(p):
            converged = True
            break
    if not converged:
        warnings.warn(
            f"fixed-point iteration did not converge in {max_iters} steps",
            ConvergenceWarning,
            stacklevel=2,
        )
    # one more evaluation so that p = t T(p) holds at the returned pair
    lam = norm_star(sp.mapping(p), A, p_max)
    return OracleReport("fixed_point", 1.0 / lam, p, it, converged, history)


def _rho_lower(sp):
    return spectral_radius(sp.M).lo


def feasible_at(sp, t, rho_lo=None):
    """
    Decide whether utility ``t`` is achievable.

    Returns ``(feasible, q)`` where ``q`` solves ``q = t (M q + u)``, or
    ``q = None`` when ``t * rho(M) >= 1`` is certified (no positive
    solution can exist). A strictly positive ``q`` on its own proves
    ``t * rho(M) < 1``, because ``t M q < q``.
    """
    if t <= 0:
        return True, np.zeros(sp.K)
    if rho_lo is None:
        rho_lo = _rho_lower(sp)
    if t * rho_lo >= 1:
        return False, None
    K = sp.K
    try:
        q = np.linalg.solve(np.eye(K) - t * sp.M, t * sp.u)
    except np.linalg.LinAlgError:
        return False, None
    ok = bool(np.all(q > 0) and norm_star(q, sp.A, sp.p_max) <= 1.0)
    return ok, q


def default_bracket(sp):
    """``(0, 2 * bound)`` with ``bound`` the noise/interference-limited cap on t."""
    b = compute_bound(sp)
    return 0.0, 2.0 * b.bound(sp.p_max)


def bisection_solve(sp, t_lo=None, t_hi=None, tol=1e-10, max_iters=500):
    """
    Bisection on the achievable utility.

    Stops once the bracket is narrower than ``tol * t_hi`` (initial upper
    end) and returns its midpoint. ``history`` records
    ``(t_candidate, ||q||*)`` with ``inf`` for candidates where no positive
    solution exists.
    """
    lo0, hi0 = default_bracket(sp)
    t_lo = lo0 if t_lo is None else float(t_lo)
    t_hi = hi0 if t_hi is None else float(t_hi)
    if not (0 <= t_lo < t_hi) or not np.isfinite(t_hi):
        raise ValueError(f"invalid bracket [{t_lo}, {t_hi}]")

    rho_lo = _rho_lower(sp)
    ok_lo, q_lo = feasible_at(sp, t_lo, rho_lo)
    ok_hi, _ = feasible_at(sp, t_hi, rho_lo)
    if not ok_lo or ok_hi:
        raise ValueError(
            f"invalid bracket [{t_lo}, {t_hi}]: lower end must be feasible "
            "and upper end infeasible"
        )

    width = tol * t_hi
    history = []
    it = 0
    while t_hi - t_lo > width and it < max_iters:
        it += 1
        t = 0.5 * (t_lo + t_hi)
        ok, q = feasible_at(sp, t, rho_lo)
        history.append((t, np.inf if q is None else norm_star(q, sp.A, sp.p_max)))
        if ok:
            t_lo, q_lo = t, q
        else:
            t_hi = t

    t_mid = 0.5 * (t_lo + t_hi)
    _, q = feasible_at(sp, t_mid, rho_lo)
    if q is None or np.any(q <= 0):
        q = q_lo
    return OracleReport("bisection", t_mid, q, it, t_hi - t_lo <= width, history)
