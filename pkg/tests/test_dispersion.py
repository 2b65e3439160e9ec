import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from avf_maxwell.dispersion import (
    DispersionConfig,
    a_coeffs,
    amplification,
    brillouin_sweep,
    dbar,
    dbar_derivative,
    exact_omega,
    group_velocity,
    numerical_omega,
    phase_velocity_norm,
    propagation_angles,
    random_kappa,
    sample,
    spherical_kappa,
)
from avf_maxwell.errors import ConfigurationError, UnsupportedOrderError
from avf_maxwell.grid import cube_grid
from avf_maxwell.spectral import dense_dp_matrix
from avf_maxwell.stepper import build_plan

FINE = DispersionConfig.from_cfl(150, 0.1, 0.1)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        DispersionConfig(7, 0.1, 0.01)
    with pytest.raises(ConfigurationError):
        DispersionConfig(8, 0.1, 0.0)
    with pytest.raises(UnsupportedOrderError):
        DispersionConfig(8, 0.1, 0.01, order=3)
    cfg = DispersionConfig.from_cfl(150, 0.1, 0.5, c=2.0)
    assert cfg.S == pytest.approx(0.5)
    assert cfg.points_per_wavelength([2 * np.pi / 0.5, 0, 0]) == pytest.approx(5.0)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("N", [8, 10, 16])
def test_dbar_parity(p, N):
    h = 2.0 / N
    kap = np.linspace(-np.pi / h, np.pi / h, 41)
    d = dbar(p, N, h, kap)
    if p % 2:
        assert np.all(d.real == 0.0)
        assert np.all(dbar(p, N, h, 0.0) == 0.0)
    else:
        assert np.all(d.imag == 0.0)


def test_dbar_out_of_range():
    with pytest.raises(UnsupportedOrderError):
        dbar(6, 8, 0.25, 0.0)


@pytest.mark.parametrize("N", [8, 16])
def test_dbar_resolved_modes(N):
    L = 2.0
    h = L / N
    for k0 in range(1, N // 2):
        kap = 2 * np.pi / L * k0
        # e^{-i kappa x} differentiates to -i kappa
        assert dbar(1, N, h, kap) == pytest.approx(-1j * kap, abs=1e-11 * kap)
        assert dbar(2, N, h, kap) == pytest.approx(-(kap**2), abs=1e-11 * kap**2)
        assert dbar(3, N, h, kap) == pytest.approx(1j * kap**3, abs=1e-11 * kap**3)


@pytest.mark.parametrize("N", [4, 8, 12, 16])
@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_dbar_matches_dense_window(N, p):
    """Row 0 of the dense matrix applied to a plane wave over the symmetric
    window, with the Nyquist column weighted by a cosine."""
    g = cube_grid(0, 2, N)
    h = 2.0 / N
    D1 = dense_dp_matrix(g, 0, 1)
    D = dense_dp_matrix(g, 0, p) if p % 2 else np.linalg.matrix_power(D1, p)
    j = np.arange(-(N // 2 - 1), N // 2)
    scale = np.abs(D).max()
    for kap in np.linspace(-np.pi / h, np.pi / h, 17):
        ref = np.sum(D[0, j % N] * np.exp(-1j * kap * j * h)) + D[0, N // 2] * np.cos(N // 2 * h * kap)
        assert abs(ref - dbar(p, N, h, kap)) <= 1e-11 * scale


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_dbar_derivative_finite_difference(p):
    N, h = 16, 0.125
    kap = np.linspace(-np.pi / h + 0.1, np.pi / h - 0.1, 23)
    dk = 1e-5
    fd = (dbar(p, N, h, kap + dk) - dbar(p, N, h, kap - dk)) / (2 * dk)
    an = dbar_derivative(p, N, h, kap)
    scale = np.abs(an).max()
    assert np.abs(fd - an).max() <= 1e-6 * scale


def test_a_coeffs_zero_and_order2(rng):
    assert np.all(a_coeffs([0.0, 0.0, 0.0], FINE) == 0)
    cfg = DispersionConfig.from_cfl(16, 0.125, 0.7, order=2)
    k = random_kappa(cfg, 20, rng)
    a = a_coeffs(k, cfg)
    for w in range(3):
        np.testing.assert_array_equal(a[:, w], dbar(1, 16, 0.125, k[:, w]))


def test_a_coeffs_match_mode_blocks(rng):
    g = cube_grid(0, 2, 8)
    tau = 0.05
    plan = build_plan(g, 1.0, 1.0, tau, 6)
    cfg = DispersionConfig(8, 0.25, tau)
    for _ in range(20):
        idx = tuple(int(v) for v in rng.integers(0, 4, size=3))
        b = plan.mode_block(*idx)
        kap = np.array([plan.table.lam[w][idx[w]].imag for w in range(3)])
        a = np.abs(a_coeffs(kap, cfg))
        entries = np.abs([b.abar[2, 1], b.abar[0, 2], b.abar[1, 0]]) / tau
        np.testing.assert_allclose(entries, a, rtol=0, atol=1e-11 * max(1.0, a.max()))


def test_unit_modulus(rng):
    for cfg in (FINE, DispersionConfig.from_cfl(16, 0.125, 5.0)):
        lam = amplification(random_kappa(cfg, 1000, rng), cfg)
        assert np.abs(np.abs(lam) - 1).max() <= 1e-13
    np.testing.assert_array_equal(amplification([0.0, 0.0, 0.0], FINE), np.ones(6))


def test_pairing_and_arg(rng):
    k = random_kappa(FINE, 200, rng)
    lam = amplification(k, FINE)
    np.testing.assert_allclose(lam[:, 2] * lam[:, 4], 1.0, rtol=0, atol=1e-14)
    om = numerical_omega(k, FINE)
    np.testing.assert_allclose(np.angle(lam[:, 2]) / FINE.tau, om, rtol=1e-12)


def test_omega_zero_and_refinement():
    assert numerical_omega([0.0, 0.0, 0.0], FINE) == 0.0
    # off the Fourier lattice the windowed sums converge at first order in h
    errs = []
    for N, h in ((8, 1.0), (32, 0.25), (128, 0.0625), (512, 0.015625)):
        cfg = DispersionConfig.from_cfl(N, h, 0.5)
        errs.append(abs(numerical_omega([1.0, 1.0, 1.0], cfg) - math.sqrt(3)))
    assert all(b < 0.3 * a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 3e-3


def test_omega_on_lattice_converges_in_tau():
    # kappa = (1, 1, 1) is a lattice point when N h = 2 pi
    errs = []
    for S in (0.4, 0.2, 0.1):
        cfg = DispersionConfig.from_cfl(16, 2 * np.pi / 16, S)
        errs.append(abs(numerical_omega([1.0, 1.0, 1.0], cfg) - math.sqrt(3)))
    assert errs[-1] < 1e-9
    assert errs[0] / errs[1] == pytest.approx(2**6, rel=0.05)


def test_phase_velocity_definition():
    phi, theta, n_lam = 0.7, 2.1, 8.0
    v = phase_velocity_norm(phi, theta, n_lam, FINE)
    kap = spherical_kappa(2 * np.pi / (n_lam * 0.1), phi, theta)
    assert v == pytest.approx(numerical_omega(kap, FINE) / exact_omega(kap), rel=1e-12)
    with pytest.raises(ConfigurationError):
        phase_velocity_norm(phi, theta, 2.0, FINE)


def test_phase_velocity_limit():
    devs = [abs(phase_velocity_norm(0.3, 1.0, 400.0, DispersionConfig.from_cfl(N, 0.01, 0.1)) - 1) for N in (150, 1500, 15000)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-5


def test_group_velocity_finite_differences(rng):
    cfg = FINE
    k = random_kappa(cfg, 100, rng)
    vg, mag = group_velocity(k, cfg)
    dk = 1e-5 * 2 * np.pi / (cfg.N[0] * cfg.h[0])
    fd = np.empty_like(vg)
    for w in range(3):
        e = np.zeros(3)
        e[w] = dk
        fd[:, w] = (numerical_omega(k + e, cfg) - numerical_omega(k - e, cfg)) / (2 * dk)
    rel = np.linalg.norm(fd - vg, axis=1) / np.linalg.norm(vg, axis=1)
    assert rel.max() <= 1e-6
    np.testing.assert_allclose(mag, np.linalg.norm(vg, axis=1))


def test_group_velocity_undefined_at_origin():
    vg, mag = group_velocity([0.0, 0.0, 0.0], FINE)
    assert np.all(np.isnan(vg)) and np.isnan(mag)
    assert not sample(np.zeros(3), FINE).defined


def test_group_velocity_continuum_limit():
    devs = [
        abs(group_velocity(spherical_kappa(1.0, 0.8, 0.4), DispersionConfig.from_cfl(N, 0.01, 0.1))[1] - 1)
        for N in (150, 1500, 15000)
    ]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-4


@given(st.floats(0.05, np.pi / 2), st.floats(0.01, np.pi - 0.01))
def test_vg_symmetric_in_theta(phi, theta):
    k1 = spherical_kappa(2.5 * np.pi, phi, theta)
    k2 = spherical_kappa(2.5 * np.pi, phi, 2 * np.pi - theta)
    m1 = group_velocity(k1, FINE)[1]
    m2 = group_velocity(k2, FINE)[1]
    assert m1 == pytest.approx(m2, rel=1e-12)


def test_omega_even_in_each_component(rng):
    k = random_kappa(FINE, 50, rng)
    om = numerical_omega(k, FINE)
    for w in range(3):
        flipped = k.copy()
        flipped[:, w] *= -1
        np.testing.assert_allclose(numerical_omega(flipped, FINE), om, rtol=1e-13)


def test_alpha_zero_along_z():
    vg, _ = group_velocity(spherical_kappa(2.5 * np.pi, 0.0, 0.3), FINE)
    alpha, _ = propagation_angles(vg)
    assert alpha == 0.0


def test_exact_relation_angles():
    phi = np.linspace(0.05, np.pi / 2, 7)
    theta = np.linspace(0.05, 2 * np.pi - 0.05, 11)
    P, Th = np.meshgrid(phi, theta, indexing="ij")
    kap = spherical_kappa(3.0, P, Th)
    vg_exact = kap / np.linalg.norm(kap, axis=-1, keepdims=True)
    alpha, beta = propagation_angles(vg_exact)
    np.testing.assert_allclose(alpha, P, atol=1e-12)
    np.testing.assert_allclose(beta, Th, atol=1e-12)


def test_beta_independent_of_phi():
    """At |kappa| = 2.5 pi the azimuth of the group velocity should barely move
    as the polar angle varies."""
    phi = np.linspace(np.pi / 12, np.pi / 2, 40)
    spreads = []
    for theta in np.linspace(0.1, 2 * np.pi - 0.1, 13):
        vg, _ = group_velocity(spherical_kappa(2.5 * np.pi, phi, theta), FINE)
        _, beta = propagation_angles(vg)
        spreads.append(np.ptp(np.unwrap(beta)))
    assert max(spreads) < 1e-3


def test_order6_beats_order4():
    vals = {
        order: float(phase_velocity_norm(np.pi / 4, 3 * np.pi / 8, 5.0, DispersionConfig.from_cfl(150, 0.1, 1.0, order=order)))
        for order in (4, 6)
    }
    assert abs(vals[6] - 1) < abs(vals[4] - 1)


def test_sweep_covers_closed_zone():
    cfg = DispersionConfig.from_cfl(8, 0.25, 0.5)
    pts = np.array(list(brillouin_sweep(cfg, (3, 3, 3))))
    assert pts.shape == (27, 3)
    assert np.allclose(np.abs(pts).max(axis=0), np.pi / 0.25)
    assert np.all(pts[1] - pts[0] == [np.pi / 0.25, 0, 0])
    lam = amplification(pts, cfg)
    assert np.abs(np.abs(lam) - 1).max() <= 1e-13


def test_sample_fields():
    s = sample([1.0, 2.0, -0.5], FINE)
    assert s.defined and len(s.lambdas) == 6
    assert s.abs_lambda_max == pytest.approx(1.0, abs=1e-13)
    assert s.omega_exact == pytest.approx(math.sqrt(5.25))
    assert s.vp_norm == pytest.approx(s.omega_num / s.omega_exact)
    with pytest.raises(ConfigurationError):
        sample(np.zeros((2, 3)), FINE)
