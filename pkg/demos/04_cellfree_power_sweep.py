"""
Max-min rate of one desk-scale setup against the UE power budget, with the
piecewise bound. Combiners are designed once at the default budget and
reused along the sweep.
"""

import numpy as np

from maxmin_power import compute_bound, scale, solve_closed_form
from maxmin_power.cellfree import PROFILES, REGIMES, build_ul_problem, effective_channel, make_setup

cfg = PROFILES["desk"]
setup = make_setup(cfg, 0)
grid = np.arange(-40.0, 41.0, 10.0)

for g in REGIMES:
    eff = effective_channel(setup, g)
    sp = scale(build_ul_problem(eff, 1.0, setup.sigma_noise, cfg.p_max_mw))
    bd = compute_bound(sp)
    print(f"\n{g}: p_T = {10 * np.log10(bd.p_T):.1f} dBm, ceiling {np.log2(1 + 1 / bd.rho_M):.3f} bit/s/Hz")
    for p_dbm in grid:
        p = 10 ** (p_dbm / 10)
        t = solve_closed_form(sp.with_p_max(p)).t_star
        print(f"  {p_dbm:6.1f} dBm  rate {np.log2(1 + t):7.4f}  bound {np.log2(1 + bd.bound(p)):7.4f}")
