"""
Effective-channel statistics and their mapping to max-min problems.

With joint combiners ``v_k`` and true channels ``h_j``,

    G[j, k] = E|h_j^H v_k|^2,      d_k = |E[h_k^H v_k]|^2.

Uplink:   A = I,  b = d / omega, C = G - diag(d),   sigma = noise * 1.
Downlink: A = 1,  b = d / omega, C = G^T - diag(d), sigma = noise * 1.
"""

from dataclasses import dataclass

import numpy as np

from ..problem import ProblemInstance

__all__ = [
    "EffectiveChannel",
    "estimate_effective_channel",
    "build_ul_problem",
    "build_dl_problem",
    "sinr_ul",
    "sinr_dl",
    "combiner_scale",
]

REGIMES = ("cellular", "distributed", "centralized")


@dataclass(frozen=True, eq=False)
class EffectiveChannel:
    G: np.ndarray
    d: np.ndarray
    n_samples: int
    regime: str
    G_stderr: np.ndarray = None

    @property
    def K(self):
        return self.d.shape[0]


def _flatten(x):
    # (n, L, M, K) per-AP blocks -> (n, L*M, K)
    return x.reshape(x.shape[0], -1, x.shape[-1]) if x.ndim == 4 else x


def combiner_scale(V):
    """Per-UE factor making the sample mean of ``||v_k||^2`` equal one."""
    V = _flatten(V)
    power = np.mean(np.sum(np.abs(V) ** 2, axis=1), axis=0)
    if np.any(power <= 0):
        bad = np.nonzero(power <= 0)[0].tolist()
        raise ValueError(f"zero-norm combiners for UEs {bad}")
    return 1.0 / np.sqrt(power)


def estimate_effective_channel(H, V, regime):
    """
    Sample estimates of ``G`` and ``d`` after normalizing each combiner.

    ``H`` and ``V`` hold matching samples, shape (n, L, M, K) or (n, LM, K).
    """
    H, V = _flatten(H), _flatten(V)
    n = H.shape[0]
    if n < 2:
        raise ValueError("need at least two samples")
    V = V * combiner_scale(V)[None, None, :]
    Z = np.einsum("sij,sik->sjk", np.conj(H), V)  # Z[s, j, k] = h_j^H v_k
    P = np.abs(Z) ** 2
    G = P.mean(axis=0)
    d = np.abs(np.einsum("skk->k", Z) / n) ** 2
    se = P.std(axis=0, ddof=1) / np.sqrt(n)
    return EffectiveChannel(G, d, n, regime, se)


def _check_d(eff):
    bad = np.nonzero(~(eff.d > 0))[0]
    if bad.size:
        raise ValueError(f"UE(s) {(bad + 1).tolist()} have no useful signal (d_k = 0)")


def _interference(Gx, d):
    C = Gx - np.diag(d)
    # the diagonal is a sample variance; clear round-off below zero
    return np.clip(C, 0.0, None)


def build_ul_problem(eff, omega, sigma_noise, p_max):
    _check_d(eff)
    K = eff.K
    omega = np.broadcast_to(np.asarray(omega, dtype=float), (K,))
    return ProblemInstance(
        A=np.eye(K),
        b=eff.d / omega,
        C=_interference(eff.G, eff.d),
        sigma=np.full(K, float(sigma_noise)),
        p_max=p_max,
    )


def build_dl_problem(eff, omega, sigma_noise, p_max, ap_assignment=None):
    """
    Downlink instance with a sum-power constraint, or with one constraint per
    AP when ``ap_assignment`` (serving AP of each UE, cellular case) is given.
    """
    _check_d(eff)
    K = eff.K
    omega = np.broadcast_to(np.asarray(omega, dtype=float), (K,))
    if ap_assignment is None:
        A = np.ones((K, 1))
    else:
        ap_assignment = np.asarray(ap_assignment, dtype=int)
        L = int(ap_assignment.max()) + 1
        A = np.zeros((K, L))
        A[np.arange(K), ap_assignment] = 1.0
    return ProblemInstance(
        A=A,
        b=eff.d / omega,
        C=_interference(eff.G.T, eff.d),
        sigma=np.full(K, float(sigma_noise)),
        p_max=p_max,
    )


def sinr_ul(eff, p, sigma_noise):
    p = np.asarray(p, dtype=float)
    G, d = eff.G, eff.d
    interf = G.T @ p - np.diag(G) * p
    return p * d / (p * (np.diag(G) - d) + interf + sigma_noise)


def sinr_dl(eff, p, sigma_noise):
    p = np.asarray(p, dtype=float)
    G, d = eff.G, eff.d
    interf = G @ p - np.diag(G) * p
    return p * d / (p * (np.diag(G) - d) + interf + sigma_noise)
