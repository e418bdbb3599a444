"""
Acceptance criteria, one test each. Every test prints a single
``[PASS]``/``[FAIL]`` line with the measured quantities.
"""

import time
import warnings

import numpy as np
import pytest

from maxmin_power import (
    ProblemInstance,
    bisection_solve,
    compute_bound,
    fixed_point_solve,
    norm_star,
    scale,
    sinr_ratios,
    solve_closed_form,
)
from maxmin_power.cellfree import (
    PROFILES,
    REGIMES,
    build_ul_problem,
    centralized_combiners,
    csi_view,
    effective_channel,
    lmmse_combiners,
    ltmmse_combiners,
    make_setup,
    make_statistics,
    draw_channels,
    noise_power,
    pathloss_db,
)
from maxmin_power.cli import main, simulate_rows, sweep_rows

from conftest import random_instance, symmetric_pair


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        return ok

    return emit


@pytest.fixture(scope="module")
def suite():
    rng = np.random.default_rng(2024)
    return [random_instance(rng) for _ in range(100)]


def test_1_oracle_agreement(suite, report):
    t0 = time.perf_counter()
    worst_t = worst_p = 0.0
    for inst in suite:
        sp = scale(inst)
        sol = solve_closed_form(sp)
        for rep in (bisection_solve(sp), fixed_point_solve(sp)):
            worst_t = max(worst_t, abs(rep.t_star - sol.t_star) / sol.t_star)
            worst_p = max(worst_p, np.max(np.abs(rep.p_star - sol.p_star)) / np.max(sol.p_star))
    elapsed = time.perf_counter() - t0
    ok = worst_t <= 1e-8 and worst_p <= 1e-6 and elapsed < 10
    report(1, ok, f"max rel t err {worst_t:.1e} (<=1e-8), max rel p err {worst_p:.1e} (<=1e-6), {elapsed:.1f} s (<10)")
    assert ok


def test_2_certificates(suite, report):
    violations = []
    worst = dict(norm=0.0, residual=0.0, spread=0.0)
    for i, inst in enumerate(suite):
        sp = scale(inst)
        sol = solve_closed_form(sp)
        p, t = sol.p_star, sol.t_star
        s = sinr_ratios(inst, p)
        vals = dict(
            norm=abs(norm_star(p, inst.A, inst.p_max) - 1),
            residual=np.max(np.abs(p - t * sp.mapping(p))) / np.max(p),
            spread=(s.max() - s.min()) / s.max(),
        )
        for k, v in vals.items():
            worst[k] = max(worst[k], v)
        if vals["norm"] > 1e-9 or vals["residual"] > 1e-9 or vals["spread"] > 1e-8:
            violations.append(i)
        # dominance, checked against an independent dense eigensolve
        rho = [np.max(np.abs(np.linalg.eigvals(sp.M + np.outer(sp.u, sp.A[:, n]) / sp.p_max))) for n in range(sp.N)]
        if np.max(rho) > rho[sol.active_n] * (1 + 1e-9) or not sol.all_certified:
            violations.append(i)
    ok = not violations
    report(
        2,
        ok,
        f"{len(violations)} violations; worst |norm-1| {worst['norm']:.1e}, "
        f"residual {worst['residual']:.1e}, SINR spread {worst['spread']:.1e}",
    )
    assert ok


def test_3_symmetric_two_user_instance(report):
    target = 2 / (1 + np.sqrt(5))
    sp = scale(symmetric_pair())
    t = solve_closed_form(sp).t_star
    t_fp = fixed_point_solve(sp).t_star
    t_bs = bisection_solve(sp, tol=1e-12).t_star
    ok = abs(t - target) <= 1e-9
    report(
        3,
        ok,
        f"t* = {t:.10f} (fixed point {t_fp:.10f}, bisection {t_bs:.10f}), "
        f"expected {target:.10f} +- 1e-9",
    )
    assert ok


def test_4_bound_sweep(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    excess = 0.0
    worst_ratio = np.inf
    kink_err = 0.0
    for _ in range(20):
        sp = scale(random_instance(rng, irreducible=True))
        bd = compute_bound(sp)
        rho_ref = np.max(np.abs(np.linalg.eigvals(sp.M)))
        u_norm_ref = np.max(sp.A.T @ sp.u)
        kink_err = max(kink_err, abs(bd.p_T - u_norm_ref / rho_ref) / bd.p_T)
        # kink: slope 1 just below p_T, 0 just above, continuous at p_T
        eps = 1e-6
        left = np.log(bd.bound(bd.p_T) / bd.bound(bd.p_T * (1 - eps))) / -np.log(1 - eps)
        right = np.log(bd.bound(bd.p_T * (1 + eps)) / bd.bound(bd.p_T)) / np.log(1 + eps)
        kink_err = max(kink_err, abs(left - 1), abs(right))
        # seven decades centered on p_T, half-decade steps
        budgets = bd.p_T * 10.0 ** np.arange(-3.5, 3.75, 0.5)
        t = np.array([solve_closed_form(sp.with_p_max(p)).t_star for p in budgets])
        b = bd.bound(budgets)
        excess = max(excess, np.max(t / b - 1))
        ends = bd.p_T * 10.0 ** np.array([-3.0, 3.0])
        r = [solve_closed_form(sp.with_p_max(p)).t_star / bd.bound(p) for p in ends]
        worst_ratio = min(worst_ratio, min(r))
    elapsed = time.perf_counter() - t0
    ok = excess <= 1e-9 and worst_ratio >= 0.95 and kink_err <= 1e-6 and elapsed < 30
    report(
        4,
        ok,
        f"max t*/bound - 1 = {excess:.1e} (<=1e-9), min ratio at p_T*10^+-3 = {worst_ratio:.4f} (>=0.95), "
        f"kink error {kink_err:.1e}, {elapsed:.1f} s (<30)",
    )
    assert ok


@pytest.fixture(scope="module")
def desk_rows():
    t0 = time.perf_counter()
    rows = simulate_rows(PROFILES["desk"], REGIMES)
    return rows, time.perf_counter() - t0


def test_5_desk_regime_ordering(desk_rows, report):
    rows, elapsed = desk_rows
    okrows = [r for r in rows if r["status"] == "ok"]
    mean = {g: np.mean([r["min_rate_optimal"] for r in okrows if r["regime"] == g]) for g in REGIMES}
    dominance = np.mean([r["min_rate_optimal"] >= r["min_rate_full_power"] for r in okrows])
    cell = [r for r in okrows if r["regime"] == "cellular"]
    gain_frac = np.mean([r["gain"] > 0 for r in cell])
    ok = (
        len(okrows) == len(rows) == 20 * len(REGIMES)
        and mean["centralized"] >= mean["distributed"] >= mean["cellular"]
        and dominance == 1.0
        and gain_frac >= 0.9
        and elapsed < 300
    )
    report(
        5,
        ok,
        "mean rate "
        + ", ".join(f"{g} {mean[g]:.3f}" for g in reversed(REGIMES))
        + f"; optimal >= full power in {100 * dominance:.0f}% rows; "
        f"cellular gain > 0 in {100 * gain_frac:.0f}% rows; {elapsed:.1f} s (<300)",
    )
    assert ok


def test_6_desk_sweep_shape(report):
    cfg = PROFILES["desk"]
    grid = np.arange(-60.0, 60.0 + 1e-9, 2.5)
    worst_mono = worst_sat = worst_slope = 0.0
    for index in range(3):
        setup = make_setup(cfg, index)
        for regime in REGIMES:
            inst = build_ul_problem(effective_channel(setup, regime), 1.0, setup.sigma_noise, cfg.p_max_mw)
            rows, failure = sweep_rows(inst, grid)
            assert failure is None
            t = np.array([r["t_star"] for r in rows])
            rho_M = compute_bound(scale(inst)).rho_M
            worst_mono = max(worst_mono, np.max(-np.diff(t) / t[1:]))
            top = grid >= grid[-1] - 10
            worst_sat = max(worst_sat, np.max(np.abs(t[top] * rho_M - 1)))
            bot = grid <= grid[0] + 10
            slope = np.polyfit(grid[bot] / 10, np.log10(t[bot]), 1)[0]
            worst_slope = max(worst_slope, abs(slope - 1))
    ok = worst_mono <= 0 and worst_sat <= 0.02 and worst_slope <= 0.02
    report(
        6,
        ok,
        f"max decrease {max(worst_mono, 0):.1e}, top-decade gap to 1/rho(M) {worst_sat:.2%} (<=2%), "
        f"bottom-decade slope error {worst_slope:.2%} (<=2%)",
    )
    assert ok


def test_7_simulator_micro_oracles(report):
    dbm, _ = noise_power(20e6, 7.0)
    pl = pathloss_db(1.0)
    rng = np.random.default_rng(5)
    sigma, p_max = 1e-9, 0.1
    # L = 1: team MMSE reduces to local MMSE
    g1 = 10 ** rng.uniform(-9, -6, (1, 6))
    st1 = make_statistics(g1, 1, sigma)
    csi1 = csi_view(draw_channels(g1, 2, 40, seed=1), st1.clusters)
    V0 = lmmse_combiners(csi1, st1, p_max)
    V1 = ltmmse_combiners(csi1, st1, p_max, 50, seed=2)
    team_err = np.max(np.abs(V1 - V0)) / np.max(np.abs(V0))
    # Q = 1: centralized MMSE is cellular local MMSE
    g4 = 10 ** rng.uniform(-9, -6, (4, 8))
    st4 = make_statistics(g4, 1, sigma)
    csi4 = csi_view(draw_channels(g4, 2, 40, seed=3), st4.clusters)
    same = np.array_equal(centralized_combiners(csi4, st4, p_max), lmmse_combiners(csi4, st4, p_max))
    ok = abs(dbm + 93.9897) <= 1e-3 and pl == -30.5 and team_err <= 1e-12 and same
    report(
        7,
        ok,
        f"noise {dbm:.4f} dBm, pathloss(1 m) {pl} dB, LTMMSE vs LMMSE (L=1) {team_err:.1e}, "
        f"centralized(Q=1) == LMMSE: {same}",
    )
    assert ok


def test_8_determinism(tmp_path, report):
    outs = []
    for i, extra in enumerate(([], [], ["--workers", "3"])):
        path = tmp_path / f"sim{i}.csv"
        assert main(["simulate", "--setups", "6", "--seed", "11", "--out", str(path)] + extra) == 0
        outs.append(path.read_bytes())
    sweeps = []
    for i in range(2):
        path = tmp_path / f"sweep{i}.csv"
        assert main(["sweep", "--pmax-dbm", "-30:30:5", "--seed", "11", "--out", str(path)]) == 0
        sweeps.append(path.read_bytes())
    ok = outs[0] == outs[1] == outs[2] and sweeps[0] == sweeps[1]
    report(8, ok, f"simulate serial/serial/parallel identical: {outs[0] == outs[1] == outs[2]}; "
           f"sweep reruns identical: {sweeps[0] == sweeps[1]}")
    assert ok
