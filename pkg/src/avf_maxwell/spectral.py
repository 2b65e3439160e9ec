"""Fourier pseudo-spectral differentiation on periodic grids.

Two routes are provided for the same operators:

* the transform route used in production: forward DFT along an axis,
  multiply by a diagonal of scaled wavenumbers, inverse DFT;
* explicit dense differentiation matrices built from their closed-form
  entries, kept for small-N cross-checks.

The DFT convention is the one of ``scipy.fft``: forward entries
``exp(-2*pi*i*j*k/N)`` and inverse entries ``exp(+2*pi*i*j*k/N)/N``.
In that layout the first-derivative diagonal is
``i*mu*(0, 1, ..., N/2-1, 0, -N/2+1, ..., -1)``; the Nyquist entry is zero
for ``Lambda`` and ``i*mu*N/2`` for ``Lambda_tilde``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import ConsistencyError, UnsupportedOrderError
from .grid import AXES, GridSpec

IMAG_RTOL = 1e-12
MAX_DENSE_POINTS = 32
MAX_DENSE_ORDER = 5


def _axis_index(axis) -> int:
    if isinstance(axis, str):
        return AXES.index(axis)
    if axis not in (0, 1, 2):
        raise ValueError(f"axis must be 0, 1, 2 or one of {AXES}, got {axis!r}")
    return int(axis)


def _array_axis(axis: int) -> int:
    # fields are stored (..., z, y, x)
    return -1 - axis


@dataclass(frozen=True)
class WavenumberTable:
    """Per-axis diagonals ``Lambda_w`` and ``Lambda_tilde_w`` (complex, length ``N_w``)."""

    lam: tuple[np.ndarray, np.ndarray, np.ndarray]
    lam_tilde: tuple[np.ndarray, np.ndarray, np.ndarray]

    def broadcast(self, axis: int, tilde: bool = False) -> np.ndarray:
        """Diagonal of ``axis`` reshaped to broadcast against a ``(z, y, x)`` array."""
        d = (self.lam_tilde if tilde else self.lam)[axis]
        shape = [1, 1, 1]
        shape[_array_axis(axis)] = d.size
        return d.reshape(shape)

    def real_wavenumbers(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(kx, ky, kz)`` with ``Lambda_w = i*k_w``, each broadcastable to ``(z, y, x)``."""
        return tuple(self.broadcast(a).imag for a in range(3))


def _diagonal(n: int, mu: float, tilde: bool) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n)
    k[n // 2] = n // 2 if tilde else 0.0
    d = 1j * mu * k
    d.setflags(write=False)
    return d


@lru_cache(maxsize=64)
def wavenumbers(grid: GridSpec) -> WavenumberTable:
    lam = tuple(_diagonal(n, m, False) for n, m in zip(grid.counts, grid.mu))
    lam_t = tuple(_diagonal(n, m, True) for n, m in zip(grid.counts, grid.mu))
    return WavenumberTable(lam, lam_t)


def to_real(z: np.ndarray, scale: float) -> np.ndarray:
    """Drop the imaginary part after checking it is round-off.

    ``scale`` is the magnitude the real result is allowed to reach; the
    residue must stay below ``IMAG_RTOL * scale``.
    """
    if z.size:
        resid = float(np.abs(z.imag).max())
        if resid > IMAG_RTOL * max(scale, np.finfo(float).tiny):
            raise ConsistencyError(
                f"imaginary residue {resid:.3e} exceeds {IMAG_RTOL:g} x {scale:.3e}"
            )
    return np.ascontiguousarray(z.real)


def apply_dp(grid: GridSpec, u: np.ndarray, axis, p: int, *, power_of_first: bool = False) -> np.ndarray:
    """Spectral ``p``-th derivative of scalar field ``u`` along ``axis``.

    By default this is the interpolation derivative ``D_p`` (``Lambda**p``
    for odd ``p``, ``Lambda_tilde**p`` for even ``p``). With
    ``power_of_first=True`` it is ``(D_1)**p``, i.e. always ``Lambda**p``.
    """
    if p < 1:
        raise UnsupportedOrderError(f"derivative order must be >= 1, got {p}")
    axis = _axis_index(axis)
    tab = wavenumbers(grid)
    tilde = (p % 2 == 0) and not power_of_first
    sym = tab.broadcast(axis, tilde) ** p
    ax = _array_axis(axis)
    out = sfft.ifft(sfft.fft(u, axis=ax) * sym, axis=ax)
    return to_real(out, float(np.abs(sym).max()) * float(np.abs(u).max(initial=0.0)))


def gradient(grid: GridSpec, u: np.ndarray) -> np.ndarray:
    return np.stack([apply_dp(grid, u, a, 1) for a in range(3)])


def _fft3(v: np.ndarray) -> np.ndarray:
    return sfft.fftn(v, axes=(-3, -2, -1))


def _ifft3(v: np.ndarray) -> np.ndarray:
    return sfft.ifftn(v, axes=(-3, -2, -1))


def cross_symbol(lx, ly, lz, v: np.ndarray) -> np.ndarray:
    """Apply the per-mode curl block ``(Lambda x v)`` to a spectral vector field."""
    return np.stack([
        ly * v[2] - lz * v[1],
        lz * v[0] - lx * v[2],
        lx * v[1] - ly * v[0],
    ])


def curl(grid: GridSpec, v: np.ndarray) -> np.ndarray:
    """Discrete curl ``D v``: ``(D_2 v_z - D_3 v_y, D_3 v_x - D_1 v_z, D_1 v_y - D_2 v_x)``."""
    tab = wavenumbers(grid)
    lx, ly, lz = (tab.broadcast(a) for a in range(3))
    w = cross_symbol(lx, ly, lz, _fft3(v))
    kmax = max(float(np.abs(d).max()) for d in tab.lam)
    return to_real(_ifft3(w), 2 * kmax * float(np.abs(v).max(initial=0.0)))


def dhat_coefficients(tau: float, c: float, order: int) -> tuple[float, ...]:
    """Coefficients of ``D, D^3, D^5`` in the modified curl for a given order."""
    if order == 2:
        return (1.0,)
    if order == 4:
        return (1.0, c**2 * tau**2 / 12.0)
    if order == 6:
        return (1.0, c**2 * tau**2 / 12.0, c**4 * tau**4 / 120.0)
    raise UnsupportedOrderError(f"scheme order must be 2, 4 or 6, got {order}")


def dhat_apply(grid: GridSpec, v: np.ndarray, tau: float, c: float, order: int = 6) -> np.ndarray:
    """``(D + c^2 tau^2/12 D^3 + c^4 tau^4/120 D^5) v``, truncated to ``order``."""
    coefs = dhat_coefficients(tau, c, order)
    tab = wavenumbers(grid)
    lx, ly, lz = (tab.broadcast(a) for a in range(3))
    w = cross_symbol(lx, ly, lz, _fft3(v))
    acc = coefs[0] * w
    for cf in coefs[1:]:
        w = cross_symbol(lx, ly, lz, cross_symbol(lx, ly, lz, w))
        acc = acc + cf * w
    kmax = np.sqrt(sum(float(np.abs(d).max()) ** 2 for d in tab.lam))
    bound = sum(abs(cf) * kmax ** (2 * i + 1) for i, cf in enumerate(coefs))
    return to_real(_ifft3(acc), bound * float(np.abs(v).max(initial=0.0)))


def divergence_scaled(grid: GridSpec, v: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """``D_1(s v_x) + D_2(s v_y) + D_3(s v_z)`` for a constant ``s``."""
    tab = wavenumbers(grid)
    vh = _fft3(scale * np.asarray(v))
    acc = sum(tab.broadcast(a) * vh[a] for a in range(3))
    kmax = max(float(np.abs(d).max()) for d in tab.lam)
    return to_real(_ifft3(acc), 3 * kmax * abs(scale) * float(np.abs(v).max(initial=0.0)))


# --- dense matrices (oracle use only) ------------------------------------

def dense_dp_matrix(grid: GridSpec, axis, p: int) -> np.ndarray:
    """Dense ``N_w x N_w`` matrix of the ``p``-th spectral derivative, ``1 <= p <= 5``,
    assembled entry by entry from the cotangent/cosecant closed forms."""
    if not 1 <= p <= MAX_DENSE_ORDER:
        raise UnsupportedOrderError(f"closed forms exist for p = 1..5 only, got {p}")
    axis = _axis_index(axis)
    n = grid.counts[axis]
    mu = grid.mu[axis]
    if n > MAX_DENSE_POINTS:
        raise ValueError(f"dense matrices are limited to N <= {MAX_DENSE_POINTS}")
    x = grid.axis_points(axis)
    j, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    off = j != l
    r = np.where(off, mu * (x[j] - x[l]) / 2.0, np.pi / 2.0)
    sgn = np.where((j + l) % 2 == 0, 1.0, -1.0)
    cot = np.cos(r) / np.sin(r)
    csc = 1.0 / np.sin(r)
    if p == 1:
        m = 0.5 * mu * sgn * cot
        diag = 0.0
    elif p == 2:
        m = -0.5 * mu**2 * sgn * csc**2
        diag = -mu**2 * (n**2 + 2) / 12.0
    elif p == 3:
        m = 0.75 * mu**3 * sgn * np.cos(r) * csc**3 - mu**3 * n**2 / 8.0 * sgn * cot
        diag = 0.0
    elif p == 4:
        m = mu**4 * sgn * csc**2 * (n**2 / 4.0 - 0.5 - 1.5 * cot**2)
        diag = mu**4 * (n**4 / 80.0 + n**2 / 12.0 - 1.0 / 30.0)
    else:
        m = mu**5 / 32.0 * sgn * cot * (n**4 + 20.0 * csc**2 * (4.0 + 6.0 * cot**2 - n**2))
        diag = 0.0
    return np.where(off, m, diag)


def nyquist_correction(grid: GridSpec, axis, p: int) -> np.ndarray:
    """The alternating rank-one term relating ``D_p`` to ``(D_1)**p``."""
    axis = _axis_index(axis)
    n = grid.counts[axis]
    mu = grid.mu[axis]
    j, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    sgn = np.where((j + l) % 2 == 0, 1.0, -1.0)
    amp = ((0.5j * n) ** p + (-0.5j * n) ** p).real
    return sgn * mu**p / (2.0 * n) * amp


def relation_check(grid: GridSpec, axis, p: int) -> float:
    """Max-abs residual of ``D_p = (D_1)^p + Nyquist correction``."""
    d1 = dense_dp_matrix(grid, axis, 1)
    if p == 1:
        return 0.0
    lhs = dense_dp_matrix(grid, axis, p)
    rhs = np.linalg.matrix_power(d1, p) + nyquist_correction(grid, axis, p)
    return float(np.abs(lhs - rhs).max())


def transform_dp_matrix(grid: GridSpec, axis, p: int, *, power_of_first: bool = False) -> np.ndarray:
    """Dense ``N_w x N_w`` matrix of the transform route, ``F^-1 diag^p F``."""
    axis = _axis_index(axis)
    tab = wavenumbers(grid)
    tilde = (p % 2 == 0) and not power_of_first
    sym = (tab.lam_tilde if tilde else tab.lam)[axis] ** p
    n = sym.size
    out = sfft.ifft(sym[:, None] * sfft.fft(np.eye(n), axis=0), axis=0)
    return to_real(out, float(np.abs(sym).max()))


def dense_first_derivatives(grid: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kronecker-assembled ``D_1, D_2, D_3`` acting on canonical x-fastest vectors."""
    nx, ny, nz = grid.counts
    ix, iy, iz = np.eye(nx), np.eye(ny), np.eye(nz)
    dx = np.kron(iz, np.kron(iy, dense_dp_matrix(grid, 0, 1)))
    dy = np.kron(iz, np.kron(dense_dp_matrix(grid, 1, 1), ix))
    dz = np.kron(dense_dp_matrix(grid, 2, 1), np.kron(iy, ix))
    return dx, dy, dz


def dense_curl(grid: GridSpec) -> np.ndarray:
    """The symmetric ``3s x 3s`` curl matrix on stacked ``(v_x, v_y, v_z)``."""
    d1, d2, d3 = dense_first_derivatives(grid)
    z = np.zeros_like(d1)
    return np.block([[z, -d3, d2], [d3, z, -d1], [-d2, d1, z]])
