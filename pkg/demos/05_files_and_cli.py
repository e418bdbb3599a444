"""
Instance documents and the command-line interface.

Writes an instance file, solves it through the CLI with oracle cross-check,
then exports a cell-free effective channel in the same format.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from maxmin_power import solve
from maxmin_power.cellfree import PROFILES, build_ul_problem, effective_channel, make_setup
from maxmin_power.io import effective_channel_to_dict, load_instance, save_document

tmp = Path(tempfile.mkdtemp())
here = Path(__file__).parent

cli = [sys.executable, "-m", "maxmin_power.cli"]
out = subprocess.run(cli + ["solve", str(here / "symmetric_pair.json"), "--oracle"], capture_output=True, text=True)
doc = json.loads(out.stdout)
print("exit", out.returncode, "t*", doc["t_star"], "oracle discrepancy", doc["oracle"]["max_rel_discrepancy"])

cfg = PROFILES["desk"]
setup = make_setup(cfg, 0)
eff = effective_channel(setup, "distributed")
inst = build_ul_problem(eff, 1.0, setup.sigma_noise, cfg.p_max_mw)
save_document(effective_channel_to_dict(eff, inst), tmp / "distributed.json")
print("exported effective channel, reloaded t* =", solve(load_instance(tmp / "distributed.json")).t_star)

out = subprocess.run(cli + ["sweep", str(tmp / "distributed.json"), "--pmax-dbm", "-20:40:20"], capture_output=True, text=True)
print(out.stdout)
