#!/usr/bin/env python3
"""Fit the three-point defect exponent of the Young translation model.

The defect of y(s)*(x(t)-x(s)) with linear drivers is exactly
(u-s)*(t-u), so the fitted exponent lands at 1 with constant 1.
"""
import json
import sys
from pathlib import Path

from sewkit import cli

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
out_dir.mkdir(parents=True, exist_ok=True)

config = {
    "experiment": "certify",
    "model": {"name": "young", "driver": "linear", "integrand": "linear"},
    "mode": "three_point",
    "samples": 48,
    "seed": 0,
    "output": str(out_dir / "young_fit.csv"),
}
cfg_path = out_dir / "young.json"
cfg_path.write_text(json.dumps(config, indent=2))
sys.exit(cli.run(str(cfg_path)))
