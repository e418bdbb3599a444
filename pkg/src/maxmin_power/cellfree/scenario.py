"""
Scenario configuration and the per-setup simulation pipeline.

A scenario document is JSON with any subset of the fields of
:class:`ScenarioConfig`; missing fields come from the selected profile.
Units: meters, Hz, dB, dBm.
"""

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from ..problem import evaluate_utility
from ..solver import solve
from . import _rng
from .channels import (
    csi_view,
    dbm_to_mw,
    draw_channels,
    make_statistics,
    noise_power,
    pathloss_gains,
)
from .combiners import centralized_combiners, lmmse_combiners, ltmmse_combiners
from .effective import REGIMES, build_ul_problem, estimate_effective_channel
from .geometry import make_geometry

__all__ = [
    "ScenarioConfig",
    "PROFILES",
    "load_scenario",
    "Setup",
    "make_setup",
    "effective_channel",
    "simulate_setup",
]


@dataclass(frozen=True)
class ScenarioConfig:
    L: int = 4
    M_ant: int = 2
    K: int = 8
    Q: int = 2
    area_side: float = 1000.0
    height_diff: float = 10.0
    shadow_sd_dB: float = 4.0
    bandwidth_Hz: float = 20e6
    noise_figure_dB: float = 7.0
    p_max_dBm: float = 20.0
    n_samples: int = 500
    n_stat_samples: int = 1000
    n_setups: int = 20
    seed: int = 0

    @property
    def p_max_mw(self):
        return float(dbm_to_mw(self.p_max_dBm))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


PROFILES = {
    "desk": ScenarioConfig(),
    "paper": ScenarioConfig(
        L=16, M_ant=8, K=64, Q=4, n_samples=1000, n_setups=100
    ),
}


def load_scenario(path=None, profile="desk", **overrides):
    if profile not in PROFILES:
        raise ValueError(f"unknown profile '{profile}'")
    fields = {f.name for f in dataclasses.fields(ScenarioConfig)}
    doc = {}
    if path is not None:
        from ..io import load_document

        doc = load_document(path)
        doc = doc.get("scenario", doc)
        unknown = set(doc) - fields - {"profile"}
        if unknown:
            raise ValueError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")
        profile = doc.pop("profile", profile)
    cfg = PROFILES[profile].replace(**doc)
    cfg = cfg.replace(**{k: v for k, v in overrides.items() if v is not None})
    if cfg.Q > cfg.L:
        raise ValueError(f"cluster size Q={cfg.Q} exceeds L={cfg.L}")
    if cfg.n_setups < 1 or cfg.n_samples < 2:
        raise ValueError("need n_setups >= 1 and n_samples >= 2")
    return cfg


@dataclass(frozen=True, eq=False)
class Setup:
    """One UE drop with its gains and a shared set of channel draws."""

    cfg: ScenarioConfig
    index: int
    geometry: object
    gamma: np.ndarray
    sigma_noise: float
    H: np.ndarray

    def statistics(self, Q):
        return make_statistics(self.gamma, Q, self.sigma_noise)


def make_setup(cfg, index=0):
    seed = cfg.seed
    geo = make_geometry(
        cfg.L, cfg.M_ant, cfg.K, cfg.area_side,
        seed=_rng.seed_sequence(seed, index, _rng.GEOMETRY),
        height_diff=cfg.height_diff,
    )
    gamma = pathloss_gains(geo, cfg.shadow_sd_dB, seed=_rng.seed_sequence(seed, index, _rng.SHADOWING))
    _, sigma = noise_power(cfg.bandwidth_Hz, cfg.noise_figure_dB)
    H = draw_channels(gamma, cfg.M_ant, cfg.n_samples, _rng.seed_sequence(seed, index, _rng.CHANNELS))
    return Setup(cfg, index, geo, gamma, sigma, H)


def effective_channel(setup, regime):
    """
    Design the regime's combiners at the configured ``p_max`` and estimate
    ``(G, d)`` on the setup's channel draws.
    """
    cfg = setup.cfg
    Q = 1 if regime == "cellular" else cfg.Q
    stats = setup.statistics(Q)
    csi = csi_view(setup.H, stats.clusters)
    p_max = cfg.p_max_mw
    if regime == "cellular":
        V = lmmse_combiners(csi, stats, p_max)
    elif regime == "distributed":
        stat_seed = _rng.seed_sequence(cfg.seed, setup.index, _rng.STAT_CHANNELS)
        V = ltmmse_combiners(csi, stats, p_max, cfg.n_stat_samples, stat_seed)
    elif regime == "centralized":
        V = centralized_combiners(csi, stats, p_max)
    else:
        raise ValueError(f"unknown regime '{regime}', expected one of {REGIMES}")
    return estimate_effective_channel(setup.H, V, regime)


def simulate_setup(cfg, index, regimes=REGIMES):
    """
    Max-min fair (unit weights) UL power control versus full power for one
    setup. Returns one row dict per regime; failures are recorded in
    ``status`` instead of raised.
    """
    rows = []
    try:
        setup = make_setup(cfg, index)
    except Exception as exc:  # recorded per row, the run continues
        return [_failed(index, r, exc) for r in regimes]
    p_max = cfg.p_max_mw
    for regime in regimes:
        try:
            eff = effective_channel(setup, regime)
            inst = build_ul_problem(eff, 1.0, setup.sigma_noise, p_max)
            sol = solve(inst)
            full = evaluate_utility(inst, np.full(cfg.K, p_max))
            r_opt = float(np.log2(1 + sol.t_star))
            r_full = float(np.log2(1 + full))
            rows.append(
                dict(
                    setup=index,
                    regime=regime,
                    t_star=float(sol.t_star),
                    min_rate_optimal=r_opt,
                    min_rate_full_power=r_full,
                    gain=r_opt - r_full,
                    status="ok",
                )
            )
        except Exception as exc:
            rows.append(_failed(index, regime, exc))
    return rows


def _failed(index, regime, exc):
    msg = f"error: {type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
    return dict(
        setup=index,
        regime=regime,
        t_star=float("nan"),
        min_rate_optimal=float("nan"),
        min_rate_full_power=float("nan"),
        gain=float("nan"),
        status=msg,
    )


def scenario_json(cfg):
    return json.dumps(dataclasses.asdict(cfg), indent=2)
