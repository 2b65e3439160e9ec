"""Normalised phase velocity, group velocity and propagation angles.

Produces three CSVs: phase velocity against points per wavelength for
orders 4 and 6, |v_g| over (phi, theta) at fixed |kappa|, and beta
against phi for a few azimuths.
"""

import argparse

import numpy as np

from avf_maxwell import io
from avf_maxwell.dispersion import DispersionConfig, group_velocity, phase_velocity_norm, propagation_angles, spherical_kappa


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=150)
    ap.add_argument("--h", type=float, default=0.1)
    ap.add_argument("--S", type=float, default=1.0)
    ap.add_argument("--magnitude", type=float, default=2.5 * np.pi)
    ap.add_argument("--out", default="out/dispersion_curves")
    args = ap.parse_args()
    out = io.ensure_dir(args.out)

    phi, theta = np.pi / 4, 3 * np.pi / 8
    n_lam = np.linspace(3.0, 20.0, 69)
    rows = []
    for order in (4, 6):
        cfg = DispersionConfig.from_cfl(args.N, args.h, args.S, order=order)
        for n in n_lam:
            rows.append((order, n, float(phase_velocity_norm(phi, theta, n, cfg))))
    io.write_csv(out / "phase_velocity.csv", ("order", "N_lambda", "vp_norm"), rows)

    cfg = DispersionConfig.from_cfl(args.N, args.h, 0.1)
    P, Th = np.meshgrid(np.linspace(0, np.pi / 2, 31), np.linspace(0, 2 * np.pi, 73), indexing="ij")
    vg, mag = group_velocity(spherical_kappa(args.magnitude, P, Th), cfg)
    alpha, beta = propagation_angles(vg)
    io.write_csv(
        out / "group_velocity.csv", ("phi", "theta", "vg_mag", "alpha", "beta"),
        zip(P.ravel(), Th.ravel(), mag.ravel(), alpha.ravel(), beta.ravel()),
    )

    rows = []
    phis = np.linspace(np.pi / 12, np.pi / 2, 40)
    for th in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
        _, b = propagation_angles(group_velocity(spherical_kappa(args.magnitude, phis, th), cfg)[0])
        rows.extend(zip([th] * phis.size, phis, b))
        print(f"theta={th:.4f}: beta spread over phi = {np.ptp(np.unwrap(b)):.3e} rad")
    io.write_csv(out / "beta_vs_phi.csv", ("theta", "phi", "beta"), rows)
    print(f"wrote CSVs to {out}")


if __name__ == "__main__":
    main()
