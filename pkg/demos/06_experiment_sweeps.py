"""
Driving sweeps from a config file
=================================

The experiment layer turns a flat config into a CSV with one row per
(theta, gamma, h, eps) point. The same files drive the ``uavmeta`` command.
"""

import dataclasses
import sys
import tempfile
from pathlib import Path

import numpy as np

from uavmeta import experiment

root = Path(__file__).resolve().parent.parent
cfg = sys.argv[1] if len(sys.argv) > 1 else root / "configs" / "meta_vs_altitude.cfg"
spec = experiment.load_spec(cfg)
# keep the demo short; the shipped configs use the full sizes
spec.controls = dataclasses.replace(spec.controls, n_realizations=300)

with tempfile.TemporaryDirectory() as tmp:
    out = experiment.run(spec, Path(tmp) / "sweep.csv")
    rows = np.genfromtxt(out, delimiter=",", names=True)
for r in rows[rows["theta_db"] == 0]:
    print(f"h = {r['h']:5.0f} m   M1 {r['M1_analytic']:.4f}   meta(0.9) beta {r['meta_beta']:.4f}   "
          f"semi-analytic {r['meta_semi_analytic']:.4f}")
