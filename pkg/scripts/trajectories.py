#!/usr/bin/env python3
"""Write QFI and squeezing trajectories of TAT, TnT and OAT at one N as CSV
files (one per protocol), ready for plotting against t / t_guess."""

import argparse
from pathlib import Path

from squeezetime.cli import main as cli

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for kind in ("tat", "tnt", "oat"):
        out = args.out_dir / f"trajectory_{kind}_{args.n}.csv"
        cli(["simulate", "--protocol", kind, "--n", str(args.n), "--out", str(out)])
        print(out)
