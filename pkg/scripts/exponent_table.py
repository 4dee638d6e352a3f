#!/usr/bin/env python3
"""Print the bound-vs-protocol exponent comparison for one dimension,
marking where the known protocols reach the bound."""

import argparse

from squeezetime.bounds import alpha_grid, saturation_table

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--gammas", default="1,0.5")
    ap.add_argument("--step", type=float, default=0.25)
    args = ap.parse_args()

    grid = alpha_grid(0.0, 2 * args.d + 2, args.step)
    for gamma in (float(g) for g in args.gammas.split(",")):
        print(f"\nd={args.d}, gamma={gamma}")
        print(f"{'alpha':>6} {'bound':>7} {'regime':22} {'protocol':>8} {'regime':22} sat")
        for r in saturation_table(args.d, gamma, grid):
            print(
                f"{r.alpha:6.2f} {r.beta_bound:7.3f} {r.bound_regime:22} "
                f"{r.beta_protocol:8.3f} {r.protocol_regime:22} {'yes' if r.saturated else 'no'}"
            )
