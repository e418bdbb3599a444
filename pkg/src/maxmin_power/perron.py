"""
Perron root of nonnegative matrices by power iteration.

Convergence is judged by the Collatz-Wielandt quotients of the current
iterate. For any nonnegative matrix B and strictly positive x,

    min_k (Bx)_k / x_k  <=  rho(B)  <=  max_k (Bx)_k / x_k,

so the returned enclosure brackets the spectral radius whether or not the
iteration has converged.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["PerronResult", "spectral_radius", "collatz_wielandt"]


@dataclass(frozen=True)
class PerronResult:
    rho: float
    eigvec: np.ndarray
    lo: float
    hi: float
    iterations: int
    certified: bool

    @property
    def enclosure(self):
        return (self.lo, self.hi)


def collatz_wielandt(B, x):
    """Lower/upper Collatz-Wielandt quotients of ``B`` at a positive ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Collatz-Wielandt quotients need a strictly positive vector")
    q = (B @ x) / x
    return float(q.min()), float(q.max())


_FLOOR = np.finfo(float).tiny * 2.0**52


def _dense_vector(B, delta=0.0):
    """
    Perron vector of ``B + delta * ones`` from a dense eigensolve.

    With ``delta > 0`` the matrix is positive; a few power steps then make
    the vector strictly positive even where the eigensolver returned noise.
    Returns None if no positive vector was obtained.
    """
    Bd = B + delta if delta else B
    w, V = np.linalg.eig(Bd)
    x = np.abs(np.real(V[:, np.argmax(np.real(w))]))
    if not np.all(np.isfinite(x)) or not x.max() > 0:
        return None
    x = x / x.max()
    if delta:
        for _ in range(3):
            x = Bd @ x
            x = x / x.max()
    if np.any(x <= 0):
        return None
    return x


def spectral_radius(B, tol=1e-10, max_iters=10_000, x0=None, dense_after=500):
    """
    Perron root, eigenvector and certified enclosure of a nonnegative matrix.

    Parameters
    ----------
    B : (K, K) array_like
        Nonnegative, finite matrix.
    tol : float
        Stop once ``hi - lo <= tol * max(hi, 1)``.
    max_iters : int
        Iteration cap. On exhaustion the last enclosure is returned with
        ``certified=False``.
    x0 : (K,) array_like, optional
        Strictly positive starting vector; defaults to all ones.
    dense_after : int or None
        After this many iterations without a certificate, try the Perron
        vector of a dense eigensolve as test vector. Its quotients are an
        enclosure like any other, so the result stays certified.

    Returns
    -------
    PerronResult
        ``eigvec`` is normalized to unit max-entry.

    Notes
    -----
    When ``B x0`` already has a zero entry (reducible ``B``) the iteration
    runs on ``B + s I`` with ``s`` equal to the largest row sum of ``B``.
    The shift keeps every iterate strictly positive and removes
    periodicity; quotients are shifted back before they are reported.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {B.shape}")
    if not np.all(np.isfinite(B)) or np.any(B < 0):
        raise ValueError("matrix must be finite and nonnegative")
    K = B.shape[0]
    if not np.any(B):
        return PerronResult(0.0, np.ones(K), 0.0, 0.0, 0, True)

    x = np.ones(K) if x0 is None else np.array(x0, dtype=float)
    if np.any(x <= 0):
        raise ValueError("starting vector must be strictly positive")
    x = x / x.max()

    shift = 0.0
    if np.any(B @ x <= 0):
        shift = float(B.sum(axis=1).max())
    Bs = B + shift * np.eye(K) if shift else B

    lo, hi = 0.0, np.inf
    it = 0
    for it in range(1, max_iters + 1):
        y = Bs @ x
        q = y / x
        # every positive iterate gives a valid enclosure; keep the tightest
        lo = max(lo, float(q.min()) - shift)
        hi = min(hi, float(q.max()) - shift)
        if hi - lo <= tol * max(hi, 1.0):
            return PerronResult(0.5 * (lo + hi), x, lo, hi, it, True)
        if it == dense_after:
            # any positive vector gives valid quotients; a zero-padded
            # Perron vector of a reducible B is replaced by that of B + delta
            xd = _dense_vector(B)
            if xd is None:
                xd = _dense_vector(B, 1e-9 * float(B.max()))
            if xd is not None:
                qd = (B @ xd) / xd
                lo, hi = max(lo, float(qd.min())), min(hi, float(qd.max()))
                if hi - lo <= tol * max(hi, 1.0):
                    return PerronResult(0.5 * (lo + hi), xd, lo, hi, it, True)
        x_next = y / y.max()
        if np.any(x_next < _FLOOR):
            # coordinates decayed into the subnormal range, quotients would be noise
            break
        x = x_next

    # Rayleigh-type estimate; the enclosure is still valid, only wide
    rho = float(np.clip((x @ (Bs @ x)) / (x @ x) - shift, lo, hi))
    return PerronResult(rho, x, lo, hi, it, False)
