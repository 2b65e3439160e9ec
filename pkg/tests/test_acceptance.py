"""Acceptance criteria, each run at its stated tolerance.

The terminal summary lists one PASS/FAIL line per criterion label.
"""

import math

import numpy as np
import pytest

from avf_maxwell.bench import (
    BenchmarkParams,
    invariant_drift_study,
    run_benchmark,
    spatial_accuracy_study,
    temporal_convergence_study,
)
from avf_maxwell.diagnostics import reference_scales, relative_drift
from avf_maxwell.dispersion import (
    DispersionConfig,
    amplification,
    group_velocity,
    numerical_omega,
    phase_velocity_norm,
    random_kappa,
)
from avf_maxwell.grid import build_grid, cube_grid
from avf_maxwell.spectral import (
    apply_dp,
    curl,
    dense_dp_matrix,
    gradient,
    relation_check,
    transform_dp_matrix,
)
from avf_maxwell.stepper import build_plan, dense_update_matrix, step, step_dense

from conftest import random_state

PARAMS = BenchmarkParams()
LONG_STEPS = 10_000
LONG_TAU = 0.01
LONG_CADENCE = 10


def criterion(label):
    return pytest.mark.criterion(label)


@criterion("C01 temporal order 6 (N=16, T=1)")
def test_c01_temporal_order():
    rows = temporal_convergence_study(PARAMS, 16, [0.01, 0.005], 1.0)
    assert rows[0].L2 == pytest.approx(4.5198e-08, rel=0.05)
    assert rows[1].L2 == pytest.approx(7.0731e-10, rel=0.05)
    assert 5.95 <= rows[1].rate <= 6.05


@criterion("C02 spectral spatial accuracy (N=8,16,32, tau=1e-3)")
def test_c02_spatial_accuracy():
    rows = spatial_accuracy_study(PARAMS, [8, 16, 32], 1e-3, 1.0)
    assert [r.N for r in rows] == [8, 16, 32]
    for r in rows:
        assert r.Linf <= 1e-11, f"N={r.N}: Linf={r.Linf:.3e}"


@pytest.fixture(scope="module")
def long_run():
    recs = list(invariant_drift_study(PARAMS, 16, LONG_TAU, LONG_STEPS * LONG_TAU, LONG_CADENCE))
    assert len(recs) == LONG_STEPS // LONG_CADENCE + 1
    return recs


@criterion("C03 invariant conservation over 10,000 steps")
def test_c03_invariant_drift(long_run):
    ref = long_run[0]
    scales = reference_scales(ref, PARAMS.eps, PARAMS.mu)
    worst = {}
    for rec in long_run[1:]:
        for name, v in relative_drift(rec, ref, scales).items():
            worst[name] = max(worst.get(name, 0.0), v)
    assert max(worst.values()) <= 1e-10, worst

    diff_ref = long_run[1]
    worst_diff = {}
    for rec in long_run[2:]:
        for name in ("E3", "E5x", "E5y", "E5z"):
            r0 = getattr(diff_ref, name)
            worst_diff[name] = max(worst_diff.get(name, 0.0), abs(getattr(rec, name) - r0) / abs(r0))
    assert max(worst_diff.values()) <= 1e-8, worst_diff


@criterion("C04 divergence preservation over 10,000 steps")
def test_c04_divergence(long_run):
    worst = max(max(r.divE_inf, r.divH_inf) for r in long_run)
    assert worst <= 1e-11


@criterion("C05 fast solver equals dense solve (N=4, 10 trials)")
@pytest.mark.parametrize("order", [2, 4, 6])
def test_c05_fast_vs_dense(order):
    rng = np.random.default_rng(100 + order)
    g = cube_grid(0.0, 2.0, 4)
    tau = 0.05
    plan = build_plan(g, 1.0, 1.0, tau, order)
    for _ in range(10):
        s = random_state(g, rng)
        diff = np.abs(step(s, plan).stacked() - step_dense(s, 1.0, 1.0, tau, order).stacked()).max()
        assert diff <= 1e-11


@criterion("C06 unit-modulus amplification (1000 kappa, N=8 mode maps)")
def test_c06_non_dissipation():
    rng = np.random.default_rng(6)
    cfg = DispersionConfig.from_cfl(8, 0.25, 1.0)
    lam = amplification(random_kappa(cfg, 1000, rng), cfg)
    assert np.abs(np.abs(lam) - 1).max() <= 1e-12

    plan = build_plan(cube_grid(0.0, 2.0, 8), 1.0, 1.0, 0.05, 6)
    maps = plan.all_full_step_maps().reshape(-1, 6, 6)
    eig = np.linalg.eigvals(maps)
    assert np.abs(np.abs(eig) - 1).max() <= 1e-12


@criterion("C07 symplecticity of the dense update (N=4)")
def test_c07_symplectic():
    M = dense_update_matrix(cube_grid(0.0, 2.0, 4), 1.0, 1.0, 0.1, 6)
    n = M.shape[0] // 2
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    assert np.abs(M.T @ J @ M - J).max() <= 1e-10


@criterion("C08 group velocity and amplification phase")
def test_c08_group_velocity():
    rng = np.random.default_rng(8)
    cfg = DispersionConfig.from_cfl(150, 0.1, 0.1)
    k = random_kappa(cfg, 100, rng)
    vg, _ = group_velocity(k, cfg)
    dk = 1e-5 * 2 * np.pi / (cfg.N[0] * cfg.h[0])
    fd = np.empty_like(vg)
    for w in range(3):
        e = np.zeros(3)
        e[w] = dk
        fd[:, w] = (numerical_omega(k + e, cfg) - numerical_omega(k - e, cfg)) / (2 * dk)
    rel = np.linalg.norm(fd - vg, axis=1) / np.linalg.norm(vg, axis=1)
    assert rel.max() <= 1e-6

    om = numerical_omega(k, cfg)
    lam3 = amplification(k, cfg)[:, 2]
    assert np.abs(np.angle(lam3) / cfg.tau - om).max() <= 1e-12 * np.abs(om).max()


@criterion("C09 spectral operator suite")
def test_c09_spectral_operators():
    for n in (4, 8, 12, 16):
        g = cube_grid(0.0, 2.0, n)
        for p in range(1, 6):
            D = dense_dp_matrix(g, 0, p)
            scale = np.abs(D).max()
            assert np.abs(D - transform_dp_matrix(g, 0, p)).max() <= 1e-11 * scale
            assert relation_check(g, 0, p) <= 1e-11 * scale
        D1 = dense_dp_matrix(g, 0, 1)
        assert np.abs(D1 + D1.T).max() <= 1e-12 * np.abs(D1).max()

    g = build_grid([0, 2, -1, 2, 0, 1], [8, 6, 4])
    u = np.random.default_rng(9).standard_normal(g.shape)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        ab = apply_dp(g, apply_dp(g, u, b, 1), a, 1)
        ba = apply_dp(g, apply_dp(g, u, a, 1), b, 1)
        assert np.abs(ab - ba).max() <= 1e-12 * np.abs(ab).max()
    assert np.abs(curl(g, gradient(g, u))).max() <= 1e-12 * np.abs(gradient(g, u)).max()


@criterion("C10 error growth at most linear in T (tau=0.005, N=16)")
def test_c10_linear_growth():
    errs = [run_benchmark(PARAMS, 16, 0.005, T)[0].L2 for T in (1.0, 2.0, 4.0)]
    assert errs[1] <= 2.5 * errs[0]
    assert errs[2] <= 2.5 * errs[1]


@criterion("F01 order 6 phase velocity closer to 1 than order 4 (S=1, N_lambda=5)")
def test_f01_order6_beats_order4():
    v = {
        order: float(phase_velocity_norm(math.pi / 4, 3 * math.pi / 8, 5.0, DispersionConfig.from_cfl(150, 0.1, 1.0, order=order)))
        for order in (4, 6)
    }
    assert abs(v[6] - 1) < abs(v[4] - 1)
