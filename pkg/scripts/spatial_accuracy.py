"""Spatial error of the benchmark at tau = 1e-3, T = 1 for several grid sizes."""

import argparse

from avf_maxwell import io
from avf_maxwell.bench import BenchmarkParams, spatial_accuracy_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--tau", type=float, default=1e-3)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    rows = spatial_accuracy_study(BenchmarkParams(), args.N, args.tau, args.T)
    print(f"{'N':>4} {'Linf':>12} {'L2':>12} {'wall[s]':>8}")
    for r in rows:
        print(f"{r.N:>4} {r.Linf:>12.4e} {r.L2:>12.4e} {r.wall_s:>8.2f}")
    if args.csv:
        io.write_csv(args.csv, io.SPATIAL_COLUMNS, [(r.N, r.Linf, r.L2, r.wall_s) for r in rows])


if __name__ == "__main__":
    main()
