"""Command line entry point: ``solve run|converge|spatial|invariants|dispersion``."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace

import numpy as np
import scipy.fft as sfft

from . import bench, dispersion, io
from .config import RunConfig, load_config
from .diagnostics import error_norms, invariants
from .errors import ConfigurationError, ConsistencyError, DimensionError, UnsupportedOrderError
from .grid import EMState, build_grid
from .stepper import build_plan, step

log = logging.getLogger("avf_maxwell")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def initial_state(cfg: RunConfig) -> EMState:
    grid = build_grid(cfg.bounds, cfg.counts)
    if cfg.scenario == "benchmark":
        return bench.exact_state(bench.BenchmarkParams(cfg.k, cfg.eps, cfg.mu), grid, 0.0)
    rng = np.random.default_rng(cfg.seed)
    shape = (3,) + grid.shape
    return EMState(grid, rng.standard_normal(shape), rng.standard_normal(shape), 0.0, cfg.eps, cfg.mu)


def _benchmark_params(cfg: RunConfig) -> bench.BenchmarkParams:
    if cfg.scenario != "benchmark":
        raise ConfigurationError("this command needs benchmark.scenario = \"benchmark\"")
    return bench.BenchmarkParams(cfg.k, cfg.eps, cfg.mu)


def _wall(cfg: RunConfig, value: float) -> float:
    return value if cfg.wall_time else math.nan


def cmd_run(cfg: RunConfig, out) -> None:
    state = initial_state(cfg)
    plan = build_plan(state.grid, cfg.eps, cfg.mu, cfg.tau, cfg.order)
    params = bench.BenchmarkParams(cfg.k, cfg.eps, cfg.mu) if cfg.scenario == "benchmark" else None

    def row(i, s):
        if params is None:
            return (i, s.t, invariants(s).E2, math.nan, math.nan)
        err = error_norms(s, bench.exact_sampler(params))
        return (i, s.t, invariants(s).E2, err.Linf, err.L2)

    rows = [row(0, state)]
    for i in range(1, cfg.n_steps + 1):
        state = step(state, plan).replace(t=i * cfg.tau)
    if cfg.n_steps:
        rows.append(row(cfg.n_steps, state))
    io.write_csv(out / "run.csv", io.RUN_COLUMNS, rows)
    io.write_snapshot(state, out / "snapshot")
    log.info("run: %d steps to t=%g, E2=%.17g", cfg.n_steps, state.t, rows[-1][2])


def cmd_converge(cfg: RunConfig, out) -> None:
    params = _benchmark_params(cfg)
    rows = bench.temporal_convergence_study(
        params, cfg.counts[0], cfg.tau_list, cfg.T, cfg.order, cfg.roundoff_floor
    )
    io.write_csv(
        out / "converge.csv", io.CONVERGE_COLUMNS,
        [(r.tau, r.Linf, r.L2, r.rate, _wall(cfg, r.wall_s)) for r in rows],
    )
    for r in rows:
        log.info("tau=%g Linf=%.4e L2=%.4e rate=%.4f", r.tau, r.Linf, r.L2, r.rate)


def cmd_spatial(cfg: RunConfig, out) -> None:
    params = _benchmark_params(cfg)
    rows = bench.spatial_accuracy_study(params, cfg.N_list, cfg.tau, cfg.T, cfg.order)
    io.write_csv(
        out / "spatial.csv", io.SPATIAL_COLUMNS,
        [(r.N, r.Linf, r.L2, _wall(cfg, r.wall_s)) for r in rows],
    )


def cmd_invariants(cfg: RunConfig, out) -> None:
    params = _benchmark_params(cfg)
    records = bench.invariant_drift_study(params, cfg.counts[0], cfg.tau, cfg.T, cfg.cadence, cfg.order)
    io.write_csv(
        out / "invariants.csv", io.INVARIANT_COLUMNS,
        ([getattr(r, c) for c in io.INVARIANT_COLUMNS] for r in records),
    )


def dispersion_rows(cfg: RunConfig) -> list[tuple]:
    d = cfg.dispersion
    dcfg = dispersion.DispersionConfig.from_cfl(d.N, d.h, d.S, d.c, d.order)
    if d.sweep == "zone":
        kappa = np.array(list(dispersion.brillouin_sweep(dcfg, d.counts)))
    else:
        phi = np.linspace(0.0, np.pi / 2, d.phi_count)
        theta = np.linspace(0.0, 2 * np.pi, d.theta_count, endpoint=False)
        P, Th = np.meshgrid(phi, theta, indexing="ij")
        kappa = dispersion.spherical_kappa(d.magnitude, P.ravel(), Th.ravel())
    lam = dispersion.amplification(kappa, dcfg)
    om = dispersion.numerical_omega(kappa, dcfg)
    om_ex = dispersion.exact_omega(kappa, dcfg.c)
    with np.errstate(divide="ignore", invalid="ignore"):
        vp = np.where(om_ex > 0, om / om_ex, np.nan)
    vg, mag = dispersion.group_velocity(kappa, dcfg)
    alpha, beta = dispersion.propagation_angles(vg)
    lmax = np.abs(lam).max(axis=-1)
    return [
        (*kappa[i], lmax[i], om[i], om_ex[i], vp[i], *vg[i], mag[i], alpha[i], beta[i])
        for i in range(kappa.shape[0])
    ]


def cmd_dispersion(cfg: RunConfig, out) -> None:
    io.write_csv(out / "dispersion.csv", io.DISPERSION_COLUMNS, dispersion_rows(cfg))


COMMANDS = {
    "run": cmd_run,
    "converge": cmd_converge,
    "spatial": cmd_spatial,
    "invariants": cmd_invariants,
    "dispersion": cmd_dispersion,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solve", description=__doc__)
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="TOML configuration file")
    ap.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
    ap.add_argument("--threads", type=int, default=None, help="FFT worker threads")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config)
        if args.out is not None:
            cfg = replace(cfg, out_dir=args.out)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigurationError("--threads must be >= 1")
            cfg = replace(cfg, threads=args.threads)
        out = io.ensure_dir(cfg.out_dir)
        with sfft.set_workers(cfg.threads):
            COMMANDS[args.command](cfg, out)
    except (ConfigurationError, DimensionError, UnsupportedOrderError) as exc:
        print(f"solve: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as exc:
        print(f"solve: numerical consistency error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"solve: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
