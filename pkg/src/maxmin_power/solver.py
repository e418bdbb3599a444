"""
Closed-form max-min power allocation.

For each constraint n build ``M_n = M + u a_n^T / p_max``. The optimal
utility is ``t* = 1 / max_n rho(M_n)`` and the optimal powers solve the
linear system ``(I - t* M) p = t* u``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .oracles import fixed_point_solve
from .perron import collatz_wielandt, spectral_radius
from .problem import ScaledProblem, candidate_matrix, scale

__all__ = [
    "Solution",
    "NumericalError",
    "UncertifiedWarning",
    "solve_closed_form",
    "solve",
]


class NumericalError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UncertifiedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Solution:
    """
    Attributes
    ----------
    t_star : float
        Optimal utility (balanced weighted SINR).
    p_star : (K,) array
        Optimal power vector, ``||p_star||* = 1``.
    active_n : int
        0-based index of the constraint attaining the largest radius.
    rho_all : (N,) array
        Spectral radius of every candidate matrix.
    certificate : (N, 2) array
        Collatz-Wielandt ``[lo, hi]`` enclosure of each radius.
    certified : (N,) bool array
        Whether each enclosure met the requested tolerance.
    residual : float
        ``||p - t (M p + u)||_inf / ||p||_inf`` at the returned pair.
    """

    t_star: float
    p_star: np.ndarray
    active_n: int
    rho_all: np.ndarray
    certificate: np.ndarray
    certified: np.ndarray
    residual: float
    eigvec: np.ndarray = field(repr=False, default=None)

    @property
    def all_certified(self):
        return bool(np.all(self.certified))


def _candidate_radius(sp, n, tol, max_iters):
    Mn = candidate_matrix(sp, n)
    x0 = sp.u / np.max(sp.u)
    res = spectral_radius(Mn, tol=tol, max_iters=max_iters, x0=x0)
    if res.certified or not np.all(sp.A[:, n] > 0):
        return res.rho, res.lo, res.hi, res.certified, res.eigvec

    # a_n > 0 makes the single constraint a monotone norm, so the
    # conditional eigenproblem has a unique positive solution with
    # eigenvalue rho(M_n)
    single = ScaledProblem(sp.M, sp.u, sp.A[:, [n]], sp.p_max)
    rep = fixed_point_solve(single, tol=min(tol, 1e-13), max_iters=max(max_iters, 100_000))
    x = rep.p_star
    lo, hi = collatz_wielandt(Mn, x)
    lo, hi = max(lo, res.lo), min(hi, res.hi)
    ok = hi - lo <= tol * max(hi, 1.0)
    return 0.5 * (lo + hi), lo, hi, ok, x / x.max()


def _powers(M, u, t):
    """``t (I - tM)^-1 u`` with one step of iterative refinement."""
    I_tM = np.eye(M.shape[0]) - t * M
    rhs = t * u
    try:
        lu = scipy.linalg.lu_factor(I_tM, check_finite=False)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"factorization of I - t*M failed: {exc}") from exc
    p = scipy.linalg.lu_solve(lu, rhs)
    p = p + scipy.linalg.lu_solve(lu, rhs - I_tM @ p)
    return p, lu, I_tM, rhs


def _polish(sp, n, t, t_lo, t_hi, steps=3):
    """
    Newton steps on ``a_n^T p(t) = p_max`` with ``p(t) = t (I - tM)^-1 u``.

    The root is ``1 / rho(M_n)``; iterates are kept inside ``[t_lo, t_hi]``.
    """
    a = sp.A[:, n]
    for _ in range(steps):
        p, lu, _, _ = _powers(sp.M, sp.u, t)
        g = a @ p - sp.p_max
        dp = scipy.linalg.lu_solve(lu, p / t)
        dg = a @ dp
        if not (np.isfinite(g) and dg > 0):
            break
        t_new = float(np.clip(t - g / dg, t_lo, t_hi))
        if t_new == t:
            break
        t = t_new
    return t


def solve_closed_form(sp, tol=1e-10, lin_tol=1e-12, max_iters=10_000, polish=True):
    """
    Solve the scaled max-min problem in closed form.

    Parameters
    ----------
    sp : ScaledProblem
    tol : float
        Relative width required of each spectral-radius enclosure.
    lin_tol : float
        Bound on the normwise backward error of the linear solve.
    max_iters : int
        Power-iteration cap per candidate before falling back to the
        normalized fixed-point iteration.
    polish : bool
        Refine the active radius with Newton steps on the active
        constraint, staying inside its certified enclosure. Without it the
        error of ``t*`` is amplified in ``p*`` roughly by
        ``1 / (1 - t* rho(M))``.

    Raises
    ------
    NumericalError
        If the linear system is numerically singular or yields a
        non-positive power vector.
    """
    N = sp.N
    rho_all = np.empty(N)
    cert = np.empty((N, 2))
    certified = np.empty(N, dtype=bool)
    vecs = []
    for n in range(N):
        rho, lo, hi, ok, vec = _candidate_radius(sp, n, tol, max_iters)
        rho_all[n] = rho
        cert[n] = lo, hi
        certified[n] = ok
        vecs.append(vec)

    active = int(np.argmax(rho_all))
    # an unconverged enclosure still certifies that a candidate is not active
    tight = certified.copy()
    certified |= cert[:, 1] < cert[active, 0]

    if not np.all(certified):
        bad = np.nonzero(~certified)[0].tolist()
        warnings.warn(
            f"spectral radius enclosure not certified for constraints {bad}",
            UncertifiedWarning,
            stacklevel=2,
        )

    rho_max = rho_all[active]
    if not rho_max > 0:
        raise NumericalError("largest candidate spectral radius is not positive")
    t = 1.0 / rho_max
    lo, hi = cert[active]
    if polish and lo > 0:
        t = _polish(sp, active, t, 1.0 / hi, 1.0 / lo)
        rho_all[active] = 1.0 / t

    p, _, I_tM, rhs = _powers(sp.M, sp.u, t)

    r = rhs - I_tM @ p
    scale_ = np.max(np.abs(I_tM).sum(axis=1)) * np.max(np.abs(p)) + np.max(np.abs(rhs))
    backward = float(np.max(np.abs(r)) / scale_) if scale_ > 0 else np.inf
    if not np.all(np.isfinite(p)) or backward > lin_tol:
        raise NumericalError(
            f"linear solve for p* inaccurate (backward error {backward:.3e})",
            residual=backward,
        )
    if np.any(p <= 0):
        raise NumericalError(
            "linear solve produced a non-positive power vector", residual=backward
        )

    residual = float(np.max(np.abs(p - t * sp.mapping(p))) / np.max(p))

    # tied candidates must share p* as Perron vector
    for n in np.nonzero(tight & (cert[:, 1] >= cert[active, 0]))[0]:
        if n == active:
            continue
        Mn = candidate_matrix(sp, n)
        err = np.max(np.abs(Mn @ p - p / t)) / (np.max(p) / t)
        if err > max(np.sqrt(tol), 1e-6):
            warnings.warn(
                f"constraints {active} and {n} tie in spectral radius but "
                f"p* is not a common eigenvector (rel. error {err:.2e})",
                UncertifiedWarning,
                stacklevel=2,
            )

    return Solution(
        t_star=t,
        p_star=p,
        active_n=active,
        rho_all=rho_all,
        certificate=cert,
        certified=certified,
        residual=residual,
        eigvec=vecs[active],
    )


def solve(inst, **kwargs):
    """Validate, scale and solve a :class:`ProblemInstance`."""
    return solve_closed_form(scale(inst), **kwargs)
