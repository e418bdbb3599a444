"""
How the optimum moves from noise-limited to interference-limited as the
budget grows, and how close the piecewise upper bound stays.
"""

import numpy as np

from maxmin_power import compute_bound, regime, scale, solve_closed_form
from maxmin_power import ProblemInstance

rng = np.random.default_rng(1)
K = 6
inst = ProblemInstance(
    A=np.eye(K),
    b=rng.uniform(0.5, 2.0, K),
    C=rng.uniform(0.0, 0.2, (K, K)) * (1 - np.eye(K)),
    sigma=np.ones(K),
    p_max=1.0,
)
sp = scale(inst)
bd = compute_bound(sp)
print(f"rho(M) = {bd.rho_M:.4f}, interference ceiling 1/rho(M) = {1 / bd.rho_M:.4f}")
print(f"transition point p_T = {bd.p_T:.4f}\n")

print(f"{'p_max/p_T':>10} {'t*':>12} {'bound':>12} {'ratio':>8}  regime")
for e in np.arange(-3, 3.5, 0.5):
    p = bd.p_T * 10**e
    t = solve_closed_form(sp.with_p_max(p)).t_star
    b = bd.bound(p)
    print(f"{10**e:10.3g} {t:12.5g} {b:12.5g} {t / b:8.4f}  {regime(sp, p, bd)}")
