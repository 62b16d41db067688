#!/usr/bin/env python3
"""Sew the linear one-step model on [0,1] and watch it converge to e.

Writes the config and the resulting CSV under ./out (override with argv[1]).
"""
import json
import sys
from pathlib import Path

from sewkit import cli

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
out_dir.mkdir(parents=True, exist_ok=True)

config = {
    "experiment": "sew",
    "model": {"name": "euler_linear", "lam": 1.0},
    "interval": [0.0, 1.0],
    "tol": 1e-8,
    "max_level": 20,
    "seed": 0,
    "output": str(out_dir / "euler_sew.csv"),
}
cfg_path = out_dir / "euler.json"
cfg_path.write_text(json.dumps(config, indent=2))
sys.exit(cli.run(str(cfg_path)))
