"""
Combiner designs for three levels of AP cooperation.

All functions take per-sample CSI of shape (n, L, M, K) and return joint
combiners in the same per-AP block layout: ``V[s, l, :, k]`` is the block of
UE k's combiner applied at AP l in sample s. Blocks of APs outside a UE's
cluster are zero. Combiners are unnormalized.

* cellular / local MMSE: each AP filters with its own CSI only.
* local team MMSE: local MMSE followed by a statistical per-AP
  correction ``W_l`` that accounts for what the other cluster APs do.
* centralized MMSE: the cluster stacks its CSI and applies one joint filter.
"""

import numpy as np

from .channels import draw_channels, csi_view, serving_mask

__all__ = [
    "lmmse_combiners",
    "team_statistics",
    "team_coefficients",
    "ltmmse_combiners",
    "centralized_combiners",
]


def _mmse(Hs, load):
    """``(Hs Hs^H + diag(load))^-1 Hs`` over leading batch axes."""
    R = Hs @ np.conj(np.swapaxes(Hs, -1, -2))
    idx = np.arange(R.shape[-1])
    R[..., idx, idx] += load
    return np.linalg.solve(R, Hs)


def _reg(stats, p_max):
    return stats.sigma_noise / p_max


def lmmse_combiners(csi, stats, p_max):
    """
    Per-AP local MMSE ``(H_l H_l^H + Sigma_l + sigma/p_max I)^-1 H_l``.

    ``Sigma_l`` is the total gain of the UEs that AP l does not serve.
    """
    n, L, M, K = csi.shape
    load = stats.csi_error_power() + _reg(stats, p_max)  # (L,)
    return _mmse(csi, np.repeat(load[:, None], M, axis=1)[None])


def team_statistics(csi, stats, p_max):
    """Monte-Carlo estimate of ``Pi_l = E[H_l^H V_l]`` from LMMSE draws, shape (L, K, K)."""
    V = lmmse_combiners(csi, stats, p_max)
    return np.einsum("slmi,slmk->lik", np.conj(csi), V) / csi.shape[0]


def team_coefficients(Pi, clusters):
    """
    Solve, for every UE k, the coupled system over its serving APs

        w_lk + sum_{j in L_k, j != l} Pi_j w_jk = e_k     (l in L_k)

    with ``w_lk = 0`` for ``l`` outside ``L_k``. Returns ``W`` of shape
    (L, K, K) with ``W[l][:, k] = w_lk``.
    """
    L, K, _ = Pi.shape
    clusters = np.asarray(clusters)
    W = np.zeros((L, K, K), dtype=complex)
    eye = np.eye(K)
    for k in range(K):
        S = clusters[k]
        Q = len(S)
        B = np.zeros((Q * K, Q * K), dtype=complex)
        for a in range(Q):
            for b in range(Q):
                B[a * K:(a + 1) * K, b * K:(b + 1) * K] = eye if a == b else Pi[S[b]]
        rhs = np.tile(eye[:, k], Q)
        w = np.linalg.solve(B, rhs)
        resid = np.max(np.abs(B @ w - rhs))
        if not np.isfinite(resid) or resid > 1e-8:
            raise np.linalg.LinAlgError(
                f"team MMSE system for UE {k} is ill conditioned (residual {resid:.2e})"
            )
        for a, l in enumerate(S):
            W[l, :, k] = w[a * K:(a + 1) * K]
    return W


def ltmmse_combiners(csi, stats, p_max, n_stat_samples=1000, seed=None, Pi=None):
    """
    Local team MMSE combiners ``V_l^LMMSE W_l``.

    ``Pi`` is estimated from ``n_stat_samples`` fresh channel draws of
    stream ``seed`` unless given explicitly.
    """
    if Pi is None:
        M = csi.shape[2]
        H_stat = draw_channels(stats.gamma, M, n_stat_samples, seed)
        Pi = team_statistics(csi_view(H_stat, stats.clusters), stats, p_max)
    W = team_coefficients(Pi, stats.clusters)
    V = lmmse_combiners(csi, stats, p_max)
    return np.einsum("slmi,lik->slmk", V, W)


def centralized_combiners(csi, stats, p_max):
    """
    Cluster-wide MMSE: for UE k stack the CSI of its serving APs (QM rows),
    load the diagonal with their CSI error power plus ``sigma/p_max`` and
    keep column k.
    """
    n, L, M, K = csi.shape
    err = stats.csi_error_power()
    reg = _reg(stats, p_max)
    V = np.zeros_like(csi)
    for k in range(K):
        S = stats.clusters[k]
        Hk = csi[:, S].reshape(n, len(S) * M, K)
        load = np.repeat(err[S] + reg, M)
        Vk = _mmse(Hk, load)[:, :, k]
        V[..., k][:, S] = Vk.reshape(n, len(S), M)
    return V
