"""
Command-line entry point.

    maxmin-power [--profile desk|paper] solve INSTANCE [--oracle] [--tol X]
    maxmin-power [--profile desk|paper] sweep CONFIG --pmax-dbm LO:HI:STEP
    maxmin-power [--profile desk|paper] simulate CONFIG --regimes R1,R2 --setups N --seed S

``solve`` writes a JSON solution document; ``sweep`` and ``simulate`` write
CSV. Output goes to stdout unless ``--out`` is given and is only written
once the command has finished. Exit codes: 0 ok, 1 usage, 2 validation,
3 numerical failure.
"""

import argparse
import csv
import io
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .bounds import compute_bound, regime as operating_regime
from .io import DocumentError, instance_from_dict, load_document, solution_to_dict
from .oracles import ConvergenceWarning, bisection_solve, fixed_point_solve
from .problem import InvalidInstanceError, scale
from .solver import NumericalError, UncertifiedWarning, solve_closed_form

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3

SWEEP_COLUMNS = ("p_max_dBm", "t_star", "bound", "regime", "min_rate_bps_hz")
SIMULATE_COLUMNS = (
    "seed",
    "setup",
    "regime",
    "t_star",
    "min_rate_optimal",
    "min_rate_full_power",
    "gain",
    "status",
)
FLOAT_FMT = "{:.12e}"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT.format(float(x))
    return str(x)


def _csv(columns, rows, trailer=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    if trailer:
        buf.write(f"# {trailer}\n")
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(out).write_text(text, encoding="utf-8")


def parse_grid(spec):
    """``"LO:HI:STEP"`` in dBm to an inclusive, strictly increasing grid."""
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"bad grid '{spec}', expected LO:HI:STEP") from None
    if not (np.isfinite([lo, hi, step]).all() and step > 0 and hi >= lo):
        raise UsageError(f"grid '{spec}' is not strictly increasing")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


# -- solve -------------------------------------------------------------------


def _rel(a, b):
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def cmd_solve(args):
    doc = load_document(args.instance)
    inst = instance_from_dict(doc)
    sp = scale(inst)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UncertifiedWarning)
        sol = solve_closed_form(sp, tol=args.tol)
    out = solution_to_dict(inst, sol)
    status = EXIT_OK if sol.all_certified else EXIT_NUMERICAL
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.oracle:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ConvergenceWarning)
            fp = fixed_point_solve(sp)
            bs = bisection_solve(sp)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        scale_p = max(np.max(np.abs(sol.p_star)), np.finfo(float).tiny)
        disc = max(
            _rel(fp.t_star, sol.t_star),
            _rel(bs.t_star, sol.t_star),
            np.max(np.abs(fp.p_star - sol.p_star)) / scale_p,
            np.max(np.abs(bs.p_star - sol.p_star)) / scale_p,
        )
        out["oracle"] = {
            "fixed_point_t_star": float(fp.t_star),
            "bisection_t_star": float(bs.t_star),
            "fixed_point_converged": bool(fp.converged),
            "bisection_converged": bool(bs.converged),
            "max_rel_discrepancy": float(disc),
        }
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    if status != EXIT_OK:
        print("error: solution not certified", file=sys.stderr)
    return status


# -- sweep -------------------------------------------------------------------


def _sweep_problem(args):
    """The instance to sweep: an instance document, or a scenario setup."""
    from .cellfree import build_ul_problem, effective_channel, load_scenario, make_setup

    doc = load_document(args.config) if args.config else {}
    if "C" in doc:
        return instance_from_dict(doc)
    cfg = load_scenario(args.config, args.profile, seed=args.seed)
    setup = make_setup(cfg, args.setup)
    eff = effective_channel(setup, args.regime)
    return build_ul_problem(eff, 1.0, setup.sigma_noise, cfg.p_max_mw)


def sweep_rows(inst, grid_dbm, tol=1e-10):
    """Rows of the sweep table; stops at the first solver failure."""
    sp = scale(inst)
    bd = compute_bound(sp)
    rows = []
    for p_dbm in grid_dbm:
        p = 10.0 ** (p_dbm / 10.0)
        try:
            sol = solve_closed_form(sp.with_p_max(p), tol=tol)
        except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
            return rows, f"aborted at p_max_dBm={p_dbm:g}: {exc}"
        rows.append(
            dict(
                p_max_dBm=float(p_dbm),
                t_star=float(sol.t_star),
                bound=float(bd.bound(p)),
                regime=operating_regime(sp, p, bd),
                min_rate_bps_hz=float(np.log2(1.0 + sol.t_star)),
            )
        )
    return rows, None


def cmd_sweep(args):
    grid = parse_grid(args.pmax_dbm)
    inst = _sweep_problem(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UncertifiedWarning)
        rows, failure = sweep_rows(inst, grid, args.tol)
    _emit(_csv(SWEEP_COLUMNS, rows, failure), args.out)
    if failure:
        print(f"error: {failure}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


# -- simulate ----------------------------------------------------------------


def _simulate_one(job):
    from .cellfree import simulate_setup

    cfg, index, regimes = job
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = simulate_setup(cfg, index, regimes)
    for r in rows:
        r["seed"] = cfg.seed
    return rows


def simulate_rows(cfg, regimes, workers=1):
    jobs = [(cfg, i, tuple(regimes)) for i in range(cfg.n_setups)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_simulate_one, jobs))
    else:
        chunks = [_simulate_one(j) for j in jobs]
    order = {r: i for i, r in enumerate(regimes)}
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["seed"], r["setup"], order[r["regime"]]))
    return rows


def cmd_simulate(args):
    from .cellfree import REGIMES, load_scenario

    regimes = [r.strip() for r in args.regimes.split(",") if r.strip()]
    bad = [r for r in regimes if r not in REGIMES]
    if bad or not regimes:
        raise UsageError(f"unknown regime(s) {bad}; choose from {','.join(REGIMES)}")
    if args.setups is not None and args.setups < 1:
        raise UsageError("--setups must be at least 1")
    cfg = load_scenario(args.config, args.profile, n_setups=args.setups, seed=args.seed)
    rows = simulate_rows(cfg, regimes, args.workers)
    _emit(_csv(SIMULATE_COLUMNS, rows), args.out)
    failed = sum(r["status"] != "ok" for r in rows)
    if failed:
        print(f"warning: {failed} of {len(rows)} rows failed", file=sys.stderr)
    return EXIT_OK


# -- entry -------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", choices=("desk", "paper"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    p = _Parser(prog="maxmin-power", description="Max-min fair power control.")
    p.add_argument("--profile", choices=("desk", "paper"), default="desk")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("solve", parents=[common], help="solve one instance document")
    s.add_argument("instance")
    s.add_argument("--oracle", action="store_true", help="cross-check with both oracles")
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", parents=[common], help="t* and bound over a p_max grid")
    s.add_argument("config", nargs="?", help="instance or scenario document")
    s.add_argument("--pmax-dbm", required=True, metavar="LO:HI:STEP")
    s.add_argument("--regime", default="centralized", help="combiners for scenario sweeps")
    s.add_argument("--setup", type=int, default=0, help="setup index for scenario sweeps")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("simulate", parents=[common], help="optimal vs full power per setup")
    s.add_argument("config", nargs="?", help="scenario document (default: profile)")
    s.add_argument("--regimes", default="cellular,distributed,centralized")
    s.add_argument("--setups", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)
    return p


def _join_negative_grid(argv):
    # "--pmax-dbm -30:30:5" would otherwise read the grid as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--pmax-dbm":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_grid(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DocumentError, InvalidInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
