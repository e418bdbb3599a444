"""
Optimal max-min UL power control versus full power for three levels of AP
cooperation, averaged over independent desk-scale setups.

Cellular: each UE served by its strongest AP with local MMSE.
Distributed: Q APs per UE with local team MMSE.
Centralized: Q APs per UE with a joint MMSE filter.
"""

import numpy as np

from maxmin_power.cellfree import PROFILES, REGIMES, simulate_setup

cfg = PROFILES["desk"]
print(f"L={cfg.L} APs x {cfg.M_ant} antennas, K={cfg.K} UEs, Q={cfg.Q}, {cfg.n_setups} setups\n")

rows = [r for i in range(cfg.n_setups) for r in simulate_setup(cfg, i)]
print(f"{'regime':>12} {'optimal':>9} {'full power':>11} {'gain':>7}  [bit/s/Hz, min over UEs]")
for g in REGIMES:
    sel = [r for r in rows if r["regime"] == g and r["status"] == "ok"]
    opt = np.mean([r["min_rate_optimal"] for r in sel])
    full = np.mean([r["min_rate_full_power"] for r in sel])
    print(f"{g:>12} {opt:9.3f} {full:11.3f} {opt - full:7.3f}")
