"""
Closed-form max-min power control on a small uplink instance, checked
against the two iterative oracles.

Three users share one receiver; each has its own power budget (A = I).
"""

import numpy as np

from maxmin_power import (
    ProblemInstance,
    bisection_solve,
    fixed_point_solve,
    norm_star,
    scale,
    sinr_ratios,
    solve_closed_form,
)

inst = ProblemInstance(
    A=np.eye(3),
    b=np.array([1.0, 0.8, 1.2]),  # direct gains (weights folded in)
    C=np.array([[0.0, 0.1, 0.2], [0.15, 0.0, 0.05], [0.1, 0.3, 0.0]]),  # C[j, k]: j -> k
    sigma=np.full(3, 0.1),
    p_max=1.0,
)
sp = scale(inst)
sol = solve_closed_form(sp)

print("t*        ", sol.t_star)
print("p*        ", sol.p_star)
print("SINRs     ", sinr_ratios(inst, sol.p_star))  # all equal to t*
print("||p*||    ", norm_star(sol.p_star, inst.A, inst.p_max))  # on the boundary
print("active n  ", sol.active_n, " radii", sol.rho_all)
print("enclosures", sol.certificate.tolist())

# the oracles never use the closed form
fp = fixed_point_solve(sp)
bs = bisection_solve(sp)
print(f"fixed point t* {fp.t_star:.12f} after {fp.iterations} steps")
print(f"bisection   t* {bs.t_star:.12f} after {bs.iterations} steps")
