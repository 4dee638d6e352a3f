#!/usr/bin/env python3
"""Sweep all three protocols over N, fit the optimal-time and optimal-QFI
scaling amplitudes, and print them next to the reference values.

    python3 scripts/reproduce_scaling.py --n 400:1000:50 --out-dir results/
"""

import argparse
import json
from pathlib import Path

from squeezetime.cli import main as cli

REFERENCE = {
    ("tat", "t_opt"): 0.4730, ("tnt", "t_opt"): 0.554, ("oat", "t_opt"): 1.144,
    ("tat", "f_q_opt"): 0.3627, ("tnt", "f_q_opt"): 1.32, ("oat", "f_q_opt"): 1.152,
}


def run(n_range: str, out_dir: Path, jobs: int) -> list[dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    sweep, fit = out_dir / "sweep.csv", out_dir / "fit.json"
    status = cli(["sweep", "--protocols", "tat,tnt,oat", "--n", n_range, "--jobs", str(jobs), "--out", str(sweep)])
    if status != 0:
        raise SystemExit(f"sweep reported failures, see {sweep}")
    cli(["fit", "--input", str(sweep), "--format", "json", "--out", str(fit)])
    return json.loads(fit.read_text())["rows"]


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="400:1000:50")
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    print(f"{'protocol':8} {'quantity':8} {'model':22} {'A':>8} {'+/-':>8} {'ref':>7} {'dev':>7}")
    for row in run(args.n, args.out_dir, args.jobs):
        ref = REFERENCE[(row["protocol"], row["quantity"])]
        dev = row["amplitude"] / ref - 1
        print(
            f"{row['protocol']:8} {row['quantity']:8} {row['model']:22} "
            f"{row['amplitude']:8.4f} {row['std_error']:8.4f} {ref:7.4f} {dev:+7.2%}"
        )
