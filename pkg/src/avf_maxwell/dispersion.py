"""Numerical dispersion of the AVF scheme with pseudo-spectral curl.

For a plane wave ``u_j = u_0 exp(-i kappa j h)`` each ``p``-th power of the
first-derivative matrix acts as multiplication by a scalar ``dbar_p``
(purely imaginary for odd ``p``, real for even ``p``). Those scalars feed
the symbols ``a_w`` of the modified curl, and the one-step amplification
factors follow as

    lambda = (1 +- i (tau c / 2) R) / (1 -+ i (tau c / 2) R),
    R = sqrt(|a_x|^2 + |a_y|^2 + |a_z|^2),

so that ``tan(omega tau / 2) = (tau c / 2) R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, UnsupportedOrderError

_PERM = ((0, 1, 2), (1, 2, 0), (2, 0, 1))  # (w, p, q): w and the two other axes
R_ROUNDOFF = 1e-12  # relative to pi/h; smaller R is treated as zero


@dataclass(frozen=True)
class DispersionConfig:
    """Grid and time-step parameters entering the dispersion relation."""

    N: tuple[int, int, int]
    h: tuple[float, float, float]
    tau: float
    c: float = 1.0
    order: int = 6

    def __post_init__(self):
        N = tuple(int(n) for n in np.broadcast_to(self.N, 3))
        h = tuple(float(v) for v in np.broadcast_to(self.h, 3))
        if any(n < 4 or n % 2 for n in N):
            raise ConfigurationError(f"point counts must be even and >= 4, got {N}")
        if any(not v > 0 for v in h) or not self.tau > 0 or not self.c > 0:
            raise ConfigurationError("h, tau and c must be positive")
        if self.order not in (2, 4, 6):
            raise UnsupportedOrderError(f"scheme order must be 2, 4 or 6, got {self.order}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "h", h)

    @classmethod
    def from_cfl(cls, N: int, h: float, S: float, c: float = 1.0, order: int = 6) -> "DispersionConfig":
        """Uniform grid with Courant number ``S = c tau / h``."""
        return cls((N,) * 3, (h,) * 3, S * h / c, c, order)

    @property
    def S(self) -> float:
        """Courant number ``c tau / h`` (smallest spacing)."""
        return self.c * self.tau / min(self.h)

    def points_per_wavelength(self, kappa) -> float:
        """``N_lambda = lambda / h`` with ``lambda = 2 pi / |kappa|``."""
        k = float(np.linalg.norm(kappa))
        return math.inf if k == 0 else 2 * math.pi / (k * min(self.h))

    def zone_edge(self) -> np.ndarray:
        """``pi / h_w``, the Brillouin-zone half-width per axis."""
        return np.pi / np.asarray(self.h)

    @property
    def series(self) -> tuple[float, float]:
        """Weights of the ``tau^2`` and ``tau^4`` corrections for this order."""
        ct2 = (self.c * self.tau) ** 2
        c2 = ct2 / 12.0 if self.order >= 4 else 0.0
        c4 = ct2**2 / 120.0 if self.order >= 6 else 0.0
        return c2, c4


@dataclass(frozen=True)
class DispersionSample:
    kappa: tuple[float, float, float]
    lambdas: tuple[complex, ...]
    omega_num: float
    omega_exact: float
    vp_norm: float
    vg: tuple[float, float, float]
    vg_mag: float
    alpha: float
    beta: float

    @property
    def abs_lambda_max(self) -> float:
        return max(abs(v) for v in self.lambdas)

    @property
    def defined(self) -> bool:
        """False at ``kappa = 0``, where the group velocity has no value."""
        return math.isfinite(self.vg_mag)


# --- dbar sums ------------------------------------------------------------

@lru_cache(maxsize=128)
def _dbar_coefficients(p: int, N: int, h: float) -> tuple[float, float, np.ndarray]:
    """``(const, nyquist, s_k)`` with

    odd p:  dbar = i * sum_k s_k sin(k h kappa)
    even p: dbar = const + nyquist * cos(N/2 h kappa) + sum_k s_k cos(k h kappa)
    """
    if not 1 <= p <= 5:
        raise UnsupportedOrderError(f"dbar is available for p = 1..5, got {p}")
    k = np.arange(1, N // 2)
    t = k * np.pi / N
    sgn = np.where(k % 2 == 0, 1.0, -1.0)
    cot = np.cos(t) / np.sin(t)
    csc2 = 1.0 / np.sin(t) ** 2
    alt = -1.0 if (N // 2) % 2 else 1.0
    w = np.pi / h
    const = nyq = 0.0
    if p == 1:
        s = 2 * sgn * np.pi / (N * h) * cot
    elif p == 2:
        base = (np.pi / (N * h)) ** 2
        const = (N - (N**2 + 2) / 3.0) * base
        nyq = alt * (N - 2) * base
        s = sgn * (2 * np.pi**2 / (N * h**2) - (2 * np.pi / (N * h)) ** 2 * csc2)
    elif p == 3:
        s = -2 * sgn / N * w**3 * (cot - 6.0 / N**2 * np.cos(t) * csc2 / np.sin(t))
    elif p == 4:
        const = w**4 * (0.2 - 1.0 / N + 4.0 / (3 * N**2) - 8.0 / (15 * N**4))
        nyq = w**4 * alt * (4.0 / N**2 - 8.0 / N**4 - 1.0 / N)
        s = 2 * sgn * w**4 * (csc2 * (4.0 / N**2 - 8.0 / N**4 - 24.0 / N**4 * cot**2) - 1.0 / N)
    else:
        s = 2 * sgn * w**5 * cot * (1.0 / N + 20.0 / N**5 * csc2 * (4 + 6 * cot**2 - N**2))
    s.setflags(write=False)
    return const, nyq, s


def dbar(p: int, N: int, h: float, kappa) -> np.ndarray:
    """Plane-wave symbol of the ``p``-th power of the first-derivative matrix.

    Odd ``p`` gives a purely imaginary result, even ``p`` a real one; the
    return dtype is complex either way.
    """
    const, nyq, s = _dbar_coefficients(p, N, h)
    kap = np.asarray(kappa, dtype=float)
    kh = np.multiply.outer(kap, np.arange(1, N // 2) * h)
    if p % 2:
        return 1j * (np.sin(kh) @ s)
    return (const + nyq * np.cos(0.5 * N * h * kap) + np.cos(kh) @ s) + 0j


def dbar_derivative(p: int, N: int, h: float, kappa) -> np.ndarray:
    """Exact ``d dbar_p / d kappa`` by termwise differentiation."""
    const, nyq, s = _dbar_coefficients(p, N, h)
    kap = np.asarray(kappa, dtype=float)
    kk = np.arange(1, N // 2) * h
    kh = np.multiply.outer(kap, kk)
    if p % 2:
        return 1j * (np.cos(kh) @ (s * kk))
    return (-nyq * 0.5 * N * h * np.sin(0.5 * N * h * kap) - np.sin(kh) @ (s * kk)) + 0j


def _dbar_table(kappa: np.ndarray, cfg: DispersionConfig, derivative: bool = False) -> np.ndarray:
    """``T[..., w, p-1]`` holding ``dbar_p`` (or its derivative) for axis ``w``."""
    f = dbar_derivative if derivative else dbar
    out = np.empty(kappa.shape[:-1] + (3, 5), dtype=complex)
    for w in range(3):
        for p in range(1, 6):
            out[..., w, p - 1] = f(p, cfg.N[w], cfg.h[w], kappa[..., w])
    return out


def _as_kappa(kappa) -> np.ndarray:
    k = np.asarray(kappa, dtype=float)
    if k.shape[-1:] != (3,):
        raise ConfigurationError(f"kappa must have a trailing axis of length 3, got shape {k.shape}")
    return k


def _a_from_table(d: np.ndarray, c2: float, c4: float) -> np.ndarray:
    out = np.empty(d.shape[:-2] + (3,), dtype=complex)
    for w, p, q in _PERM:
        d1, d3, d5 = d[..., w, 0], d[..., w, 2], d[..., w, 4]
        d2p, d2q = d[..., p, 1], d[..., q, 1]
        d4p, d4q = d[..., p, 3], d[..., q, 3]
        out[..., w] = (
            d1
            - c2 * (d3 + d1 * (d2p + d2q))
            + c4 * (d5 + d1 * (d4p + 2 * d2p * d2q + d4q) + 2 * d3 * (d2p + d2q))
        )
    return out


def a_coeffs(kappa, cfg: DispersionConfig) -> np.ndarray:
    """Symbols ``(a_x, a_y, a_z)`` of the modified curl; shape ``kappa.shape``."""
    k = _as_kappa(kappa)
    return _a_from_table(_dbar_table(k, cfg), *cfg.series)


def _r(kappa, cfg: DispersionConfig) -> np.ndarray:
    a = a_coeffs(kappa, cfg)
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))


def amplification(kappa, cfg: DispersionConfig) -> np.ndarray:
    """The six one-step amplification factors, shape ``kappa.shape[:-1] + (6,)``."""
    q = 0.5 * cfg.tau * cfg.c * _r(kappa, cfg)
    lam3 = (1 + 1j * q) / (1 - 1j * q)
    lam5 = (1 - 1j * q) / (1 + 1j * q)
    one = np.ones_like(lam3)
    return np.stack([one, one, lam3, lam3, lam5, lam5], axis=-1)


def numerical_omega(kappa, cfg: DispersionConfig) -> np.ndarray:
    """``omega = (2/tau) arctan(tau c R / 2)``."""
    return 2.0 / cfg.tau * np.arctan(0.5 * cfg.tau * cfg.c * _r(kappa, cfg))


def spherical_kappa(magnitude: float, phi, theta) -> np.ndarray:
    """``|kappa| (sin phi cos theta, sin phi sin theta, cos phi)``."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return magnitude * np.stack(
        np.broadcast_arrays(np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)), axis=-1
    )


def phase_velocity_norm(phi, theta, n_lambda: float, cfg: DispersionConfig) -> np.ndarray:
    """``|v_p / c| = N_lambda/(pi S) * arctan(|c tau a| / 2)`` for a wave with
    ``n_lambda`` points per wavelength travelling in direction ``(phi, theta)``."""
    if not n_lambda > 2:
        raise ConfigurationError(f"need more than 2 points per wavelength, got {n_lambda}")
    h = min(cfg.h)
    kappa = spherical_kappa(2 * np.pi / (n_lambda * h), phi, theta)
    ct = cfg.c * cfg.tau
    a = a_coeffs(kappa, cfg)
    return n_lambda / (np.pi * cfg.S) * np.arctan(0.5 * np.sqrt(np.sum(np.abs(ct * a) ** 2, axis=-1)))


def _da2(d: np.ndarray, dd: np.ndarray, a: np.ndarray, c2: float, c4: float) -> np.ndarray:
    """``J[..., v, w] = d(a_v^2)/d(kappa_w)``."""
    J = np.empty(a.shape + (3,), dtype=complex)
    for v, p, q in _PERM:
        d1, d3 = d[..., v, 0], d[..., v, 2]
        d2p, d2q, d4p, d4q = d[..., p, 1], d[..., q, 1], d[..., p, 3], d[..., q, 3]
        g1, g3, g5 = dd[..., v, 0], dd[..., v, 2], dd[..., v, 4]
        along = (
            g1
            - c2 * (g3 + g1 * (d2p + d2q))
            + c4 * (g5 + g1 * (d4p + 2 * d2p * d2q + d4q) + 2 * g3 * (d2p + d2q))
        )
        J[..., v, v] = 2 * a[..., v] * along
        for o, other in ((p, q), (q, p)):
            g2, g4 = dd[..., o, 1], dd[..., o, 3]
            d2o = d[..., other, 1]
            across = -c2 * d1 * g2 + c4 * ((2 * d1 * d2o + 2 * d3) * g2 + d1 * g4)
            J[..., v, o] = 2 * a[..., v] * across
    return J


def group_velocity(kappa, cfg: DispersionConfig) -> tuple[np.ndarray, np.ndarray]:
    """Analytic ``(d omega / d kappa_w)_w`` and its magnitude.

    Uses ``d omega/d kappa_w = -A * sum_v d(a_v^2)/d kappa_w`` with
    ``A = (c/2) / ((1 + (c tau/2)^2 R^2) R)``. Entries are nan where ``R``
    vanishes to round-off: at ``kappa = 0`` and at zone corners where every
    axis sits on the Nyquist edge or at zero.
    """
    k = _as_kappa(kappa)
    c2, c4 = cfg.series
    d = _dbar_table(k, cfg)
    dd = _dbar_table(k, cfg, derivative=True)
    a = _a_from_table(d, c2, c4)
    R2 = np.sum(np.abs(a) ** 2, axis=-1)
    R = np.sqrt(R2)
    r_tol = R_ROUNDOFF * float(np.max(cfg.zone_edge()))
    with np.errstate(divide="ignore", invalid="ignore"):
        A = np.where(R > r_tol, 0.5 * cfg.c / ((1 + (0.5 * cfg.c * cfg.tau) ** 2 * R2) * R), np.nan)
    J = _da2(d, dd, a, c2, c4)
    vg = -A[..., None] * np.sum(J, axis=-2).real
    return vg, np.sqrt(np.sum(vg**2, axis=-1))


def propagation_angles(vg) -> tuple[np.ndarray, np.ndarray]:
    """Polar angle ``alpha`` in ``[0, pi/2]`` and azimuth ``beta`` in ``[0, 2 pi)``
    of a group-velocity vector. ``beta`` is nan when both transverse parts vanish."""
    g = np.asarray(vg, dtype=float)
    gx, gy, gz = g[..., 0], g[..., 1], g[..., 2]
    alpha = np.arctan2(np.hypot(gx, gy), np.abs(gz))
    beta = np.mod(np.arctan2(gy, gx), 2 * np.pi)
    beta = np.where((gx == 0) & (gy == 0), np.nan, beta)
    return alpha, beta


def exact_omega(kappa, c: float = 1.0) -> np.ndarray:
    return c * np.linalg.norm(np.asarray(kappa, dtype=float), axis=-1)


def sample(kappa, cfg: DispersionConfig) -> DispersionSample:
    """All dispersion quantities at a single wave vector."""
    k = _as_kappa(kappa)
    if k.shape != (3,):
        raise ConfigurationError("sample expects a single wave vector")
    lam = amplification(k, cfg)
    om = float(numerical_omega(k, cfg))
    om_ex = float(exact_omega(k, cfg.c))
    vp = om / om_ex if om_ex > 0 else math.nan
    vg, mag = group_velocity(k, cfg)
    alpha, beta = propagation_angles(vg)
    return DispersionSample(
        tuple(float(v) for v in k), tuple(complex(v) for v in lam), om, om_ex, vp,
        tuple(float(v) for v in vg), float(mag), float(alpha), float(beta),
    )


def brillouin_sweep(cfg: DispersionConfig, counts: Sequence[int]) -> Iterator[np.ndarray]:
    """Wave vectors on a uniform lattice over the closed zone ``|h_w kappa_w| <= pi``,
    ``counts[w]`` points per axis, x varying fastest."""
    edge = cfg.zone_edge()
    axes = [np.linspace(-e, e, int(n)) if n > 1 else np.zeros(1) for e, n in zip(edge, counts)]
    for kz in axes[2]:
        for ky in axes[1]:
            for kx in axes[0]:
                yield np.array([kx, ky, kz])


def random_kappa(cfg: DispersionConfig, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` wave vectors drawn uniformly from the closed Brillouin zone."""
    edge = cfg.zone_edge()
    return rng.uniform(-edge, edge, size=(n, 3))
