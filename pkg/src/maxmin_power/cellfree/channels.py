"""
Large-scale gains, noise power and small-scale fading.

Gains follow the 3GPP-style model for a 2 GHz carrier::

    gamma_dB = -21.9 log10(D / 1 m) - 30.5 + Z

with shadowing ``Z`` correlated across UEs seen by the same AP as
``sd^2 * 2^(-delta / 9 m)`` and independent across APs.
"""

from dataclasses import dataclass

import numpy as np

from ._rng import generator, seed_sequence

__all__ = [
    "ChannelStatistics",
    "db2lin",
    "lin2db",
    "dbm_to_mw",
    "mw_to_dbm",
    "pathloss_db",
    "shadowing_correlation",
    "pathloss_gains",
    "noise_power",
    "select_clusters",
    "make_statistics",
    "sample_channels",
    "draw_channels",
    "csi_view",
    "serving_mask",
]

PATHLOSS_SLOPE_DB = 21.9
PATHLOSS_OFFSET_DB = -30.5
DECORRELATION_M = 9.0
THERMAL_NOISE_DBM_HZ = -174.0


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def lin2db(x):
    return 10.0 * np.log10(x)


dbm_to_mw = db2lin
mw_to_dbm = lin2db


def pathloss_db(distance_m):
    return -PATHLOSS_SLOPE_DB * np.log10(distance_m) + PATHLOSS_OFFSET_DB


def shadowing_correlation(ue_positions):
    """UE-distance kernel ``2^(-delta/9)``, shape (K, K)."""
    diff = ue_positions[:, None, :] - ue_positions[None, :, :]
    delta = np.sqrt(np.sum(diff**2, axis=-1))
    return 2.0 ** (-delta / DECORRELATION_M)


def _psd_sqrt(R):
    # clip round-off negative eigenvalues before taking the square root
    w, V = np.linalg.eigh(R)
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.T


def pathloss_gains(geo, shadow_sd_dB=4.0, seed=None):
    """Linear channel gains ``gamma``, shape (L, K)."""
    gain_db = pathloss_db(geo.distances())
    if shadow_sd_dB > 0:
        root = _psd_sqrt(shadowing_correlation(geo.ue_positions))
        w = generator(seed).standard_normal((geo.L, geo.K))
        gain_db = gain_db + shadow_sd_dB * (w @ root.T)
    return db2lin(gain_db)


def noise_power(bandwidth_Hz, noise_figure_dB):
    """Thermal noise plus noise figure; returns ``(dBm, mW)``."""
    if bandwidth_Hz <= 0:
        raise ValueError("bandwidth must be positive")
    dbm = THERMAL_NOISE_DBM_HZ + 10.0 * np.log10(bandwidth_Hz) + noise_figure_dB
    return float(dbm), float(db2lin(dbm))


@dataclass(frozen=True, eq=False)
class ChannelStatistics:
    gamma: np.ndarray  # (L, K), linear
    sigma_noise: float  # mW
    clusters: np.ndarray  # (K, Q) AP indices, strongest first
    Q: int

    @property
    def L(self):
        return self.gamma.shape[0]

    @property
    def K(self):
        return self.gamma.shape[1]

    def serving(self):
        return serving_mask(self.clusters, self.L)

    def csi_error_power(self):
        """Per-AP sum of gains of the UEs it does not serve, shape (L,)."""
        return np.sum(np.where(self.serving(), 0.0, self.gamma), axis=1)


def select_clusters(gamma, Q):
    """The ``Q`` strongest APs per UE; ties go to the lower AP index."""
    L = gamma.shape[0]
    if not 1 <= Q <= L:
        raise ValueError(f"cluster size Q={Q} outside [1, {L}]")
    order = np.argsort(-gamma, axis=0, kind="stable")
    return np.ascontiguousarray(order[:Q].T)


def serving_mask(clusters, L):
    K = clusters.shape[0]
    mask = np.zeros((L, K), dtype=bool)
    mask[clusters.T, np.arange(K)[None, :]] = True
    return mask


def make_statistics(gamma, Q, sigma_noise):
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma > 0)):
        raise ValueError("channel gains must be strictly positive")
    return ChannelStatistics(gamma, float(sigma_noise), select_clusters(gamma, Q), int(Q))


def draw_channels(gamma, M_ant, n_samples, seed):
    """
    ``n_samples`` i.i.d. draws of ``h_lk ~ CN(0, gamma_lk I)``.

    Draw ``i`` comes from its own stream ``(seed, i)``, so a prefix of the
    sample set does not depend on ``n_samples``. Shape (n, L, M, K).
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    L, K = gamma.shape
    amp = np.sqrt(gamma / 2.0)[:, None, :]
    base = seed_sequence(seed)
    H = np.empty((n_samples, L, M_ant, K), dtype=complex)
    for i in range(n_samples):
        g = np.random.default_rng(seed_sequence(base, i))
        z = g.standard_normal((2, L, M_ant, K))
        H[i] = amp * (z[0] + 1j * z[1])
    return H


def sample_channels(stats, geo, n_samples, seed=None):
    return draw_channels(stats.gamma, geo.M_ant, n_samples, seed)


def csi_view(H, clusters):
    """Zero the blocks of APs outside each UE's cluster (their channel mean)."""
    L = H.shape[1]
    mask = serving_mask(np.asarray(clusters), L)
    return H * mask[None, :, None, :]
