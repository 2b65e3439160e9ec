"""Temporal errors and convergence rates of the benchmark at N = 16, T = 1."""

import argparse
import math

from avf_maxwell import io
from avf_maxwell.bench import BenchmarkParams, temporal_convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=16)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--order", type=int, default=6, choices=(2, 4, 6))
    ap.add_argument("--tau", type=float, nargs="+", default=[0.01, 0.005, 0.0025, 0.00125])
    ap.add_argument("--csv", default=None, help="optional output path")
    args = ap.parse_args()

    rows = temporal_convergence_study(BenchmarkParams(), args.N, args.tau, args.T, args.order)
    print(f"{'tau':>10} {'Linf':>12} {'L2':>12} {'rate':>8} {'wall[s]':>8}")
    for r in rows:
        rate = "-" if math.isnan(r.rate) else f"{r.rate:.4f}"
        print(f"{r.tau:>10g} {r.Linf:>12.4e} {r.L2:>12.4e} {rate:>8} {r.wall_s:>8.2f}")
    if args.csv:
        io.write_csv(args.csv, io.CONVERGE_COLUMNS, [(r.tau, r.Linf, r.L2, r.rate, r.wall_s) for r in rows])


if __name__ == "__main__":
    main()
