"""Time stepping for the energy-conserving AVF scheme.

One step solves

    mu (H1 - H0)/tau  = -Dhat (E1 + E0)/2
    eps (E1 - E0)/tau =  Dhat (H1 + H0)/2

with ``Dhat = D + c^2 tau^2/12 D^3 + c^4 tau^4/120 D^5`` (truncated for
orders 2 and 4). ``D`` is diagonalised by the 3D DFT, so the ``6s x 6s``
system splits into independent ``6 x 6`` systems, one per Fourier mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal

import numpy as np
import scipy.fft as sfft

from .errors import ConfigurationError, ConsistencyError, DimensionError
from .grid import EMState, GridSpec
from .spectral import WavenumberTable, dense_curl, dhat_coefficients, to_real, wavenumbers

Storage = Literal["auto", "precomputed", "on-the-fly"]
PRECOMPUTE_MAX_N = 64
MAX_DENSE_UNKNOWNS = 6 * 8**3


def curl_block(lx, ly, lz) -> np.ndarray:
    """Per-mode ``3x3`` curl symbols ``a`` from wavenumber diagonals (broadcast to ``(..., 3, 3)``)."""
    lx, ly, lz = np.broadcast_arrays(lx, ly, lz)
    a = np.zeros(lx.shape + (3, 3), dtype=complex)
    a[..., 0, 1] = -lz
    a[..., 0, 2] = ly
    a[..., 1, 0] = lz
    a[..., 1, 2] = -lx
    a[..., 2, 0] = -ly
    a[..., 2, 1] = lx
    return a


def modified_block(a: np.ndarray, tau: float, c: float, order: int) -> np.ndarray:
    """``abar = tau*a + c^2 tau^3/12 a^3 + c^4 tau^5/120 a^5`` (truncated by order)."""
    coefs = dhat_coefficients(tau, c, order)
    a2 = a @ a
    power = a
    out = tau * coefs[0] * a
    for cf in coefs[1:]:
        power = power @ a2
        out = out + tau * cf * power
    return out


def system_matrices(abar: np.ndarray, eps: float, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """``A = [[2mu I, abar], [-abar, 2eps I]]`` and ``B = diag(2mu I, 2eps I)``."""
    shape = abar.shape[:-2]
    eye = np.eye(3)
    A = np.zeros(shape + (6, 6), dtype=complex)
    A[..., :3, :3] = 2 * mu * eye
    A[..., :3, 3:] = abar
    A[..., 3:, :3] = -abar
    A[..., 3:, 3:] = 2 * eps * eye
    B = np.diag([2 * mu] * 3 + [2 * eps] * 3).astype(complex)
    return A, B


@dataclass(frozen=True)
class ModeBlock:
    indices: tuple[int, int, int]
    a: np.ndarray
    abar: np.ndarray
    update: np.ndarray  # A^{-1} B, maps (H, E)^n to the half-step level

    @property
    def full_step(self) -> np.ndarray:
        """The one-step map ``2 A^{-1} B - I``."""
        return 2.0 * self.update - np.eye(6)


@dataclass(frozen=True, eq=False)
class SolverPlan:
    """Everything needed to advance states on one grid with fixed parameters."""

    grid: GridSpec
    eps: float
    mu: float
    tau: float
    order: int
    storage: str
    table: WavenumberTable = field(repr=False)
    blocks: np.ndarray | None = field(default=None, repr=False)
    phi: np.ndarray | None = field(default=None, repr=False)

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.eps * self.mu)

    def lambdas(self):
        return tuple(self.table.broadcast(a) for a in range(3))

    def mode_block(self, j: int, k: int, m: int) -> ModeBlock:
        """Block for Fourier indices ``(j, k, m)`` along ``(x, y, z)`` (0-based DFT layout)."""
        lam = self.table.lam
        a = curl_block(lam[0][j], lam[1][k], lam[2][m])
        abar = modified_block(a, self.tau, self.c, self.order)
        if self.blocks is not None:
            upd = self.blocks[m, k, j]
        else:
            A, B = system_matrices(abar, self.eps, self.mu)
            upd = np.linalg.solve(A, B)
        return ModeBlock((j, k, m), a, abar, upd)

    def all_full_step_maps(self) -> np.ndarray:
        """Every per-mode one-step map, shape ``(N_z, N_y, N_x, 6, 6)``."""
        if self.blocks is not None:
            upd = self.blocks
        else:
            upd = _half_step_maps(self.table, self.eps, self.mu, self.tau, self.order)
        return 2.0 * upd - np.eye(6)


def _half_step_maps(table, eps, mu, tau, order) -> np.ndarray:
    lx, ly, lz = (table.broadcast(a) for a in range(3))
    a = curl_block(lx, ly, lz)
    abar = modified_block(a, tau, 1.0 / math.sqrt(eps * mu), order)
    A, B = system_matrices(abar, eps, mu)
    det = np.linalg.det(A)
    # Every A is nonsingular; |det A| >= (2mu)^3 (2eps)^3.
    floor = 0.5 * (2 * mu) ** 3 * (2 * eps) ** 3
    if not np.all(np.abs(det) >= floor):
        raise ConsistencyError("singular per-mode system: wavenumber layout is inconsistent")
    return np.linalg.solve(A, np.broadcast_to(B, A.shape))


def build_plan(
    grid: GridSpec,
    eps: float = 1.0,
    mu: float = 1.0,
    tau: float = 0.01,
    order: int = 6,
    storage: Storage = "auto",
) -> SolverPlan:
    if not (tau > 0 and math.isfinite(tau)):
        raise ConfigurationError(f"time step must be positive, got {tau}")
    if order not in (2, 4, 6):
        raise ConfigurationError(f"scheme order must be 2, 4 or 6, got {order}")
    if not (eps > 0 and mu > 0):
        raise ConfigurationError("eps and mu must be positive")
    if storage == "auto":
        storage = "precomputed" if max(grid.counts) <= PRECOMPUTE_MAX_N else "on-the-fly"
    table = wavenumbers(grid)
    if storage == "precomputed":
        blocks = _half_step_maps(table, eps, mu, tau, order)
        return SolverPlan(grid, eps, mu, tau, order, storage, table, blocks=blocks)
    if storage == "on-the-fly":
        kx, ky, kz = table.real_wavenumbers()
        k2 = kx**2 + ky**2 + kz**2
        c2 = 1.0 / (eps * mu)
        coefs = dhat_coefficients(tau, math.sqrt(c2), order)
        # abar = phi * a, since a^3 = |k|^2 a for a curl symbol
        phi = tau * sum(cf * k2**i for i, cf in enumerate(coefs))
        return SolverPlan(grid, eps, mu, tau, order, storage, table, phi=phi)
    raise ConfigurationError(f"unknown storage mode {storage!r}")


def _check_state(state: EMState, plan: SolverPlan) -> None:
    if state.grid != plan.grid:
        raise DimensionError("state grid does not match the solver plan")
    if (state.eps, state.mu) != (plan.eps, plan.mu):
        raise DimensionError("state material parameters do not match the solver plan")


def _half_step_closed_form(plan: SolverPlan, U: np.ndarray) -> np.ndarray:
    kx, ky, kz = plan.table.real_wavenumbers()
    bx, by, bz = plan.phi * kx, plan.phi * ky, plan.phi * kz
    eps, mu = plan.eps, plan.mu
    H, E = U[:3], U[3:]

    def cross(v):
        return np.stack([by * v[2] - bz * v[1], bz * v[0] - bx * v[2], bx * v[1] - by * v[0]])

    # abar v = i (b x v); eliminate E' and split H' along / across b
    rhs = 2 * mu * H - 1j * cross(E)
    b2 = bx**2 + by**2 + bz**2
    denom = 2 * mu + b2 / (2 * eps)
    bdot = bx * rhs[0] + by * rhs[1] + bz * rhs[2]
    gamma = 1.0 / (4 * eps * mu * denom)
    Hh = rhs / denom + gamma * np.stack([bx * bdot, by * bdot, bz * bdot])
    Eh = E + (1j / (2 * eps)) * cross(Hh)
    return np.concatenate([Hh, Eh])


def step(state: EMState, plan: SolverPlan) -> EMState:
    """Advance ``state`` by one time step using the per-mode fast solver."""
    _check_state(state, plan)
    U = state.stacked()
    Uh = sfft.fftn(U, axes=(-3, -2, -1))
    if plan.blocks is not None:
        Vh = np.matmul(plan.blocks, np.moveaxis(Uh, 0, -1)[..., None])[..., 0]
        Vh = np.moveaxis(Vh, -1, 0)
    else:
        Vh = _half_step_closed_form(plan, Uh)
    scale = max(plan.eps / plan.mu, plan.mu / plan.eps, 1.0) * float(np.abs(U).max(initial=0.0))
    half = to_real(sfft.ifftn(Vh, axes=(-3, -2, -1)), 6 * scale)
    new = 2.0 * half - U
    return state.replace(H=new[:3], E=new[3:], t=state.t + plan.tau)


def run(
    state0: EMState,
    plan: SolverPlan,
    n_steps: int,
    observer: Callable[[int, EMState, EMState], object] | None = None,
    cadence: int | None = 1,
) -> tuple[EMState, list]:
    """Take ``n_steps`` steps. ``observer(i, state_i, state_{i-1})`` runs every
    ``cadence`` steps (only after the last step when ``cadence`` is None);
    its non-None return values are collected."""
    if n_steps < 0:
        raise ConfigurationError("n_steps must be >= 0")
    records = []
    state = state0
    for i in range(1, n_steps + 1):
        prev, state = state, step(state, plan)
        due = (i == n_steps) if cadence is None else (i % cadence == 0)
        if observer is not None and due:
            rec = observer(i, state, prev)
            if rec is not None:
                records.append(rec)
    return state, records


def iterate(state0: EMState, plan: SolverPlan) -> Iterator[EMState]:
    """Endless stream of successive states, starting after ``state0``."""
    state = state0
    while True:
        state = step(state, plan)
        yield state


# --- dense oracle ---------------------------------------------------------

def dense_update_matrix(grid: GridSpec, eps: float, mu: float, tau: float, order: int = 6) -> np.ndarray:
    """Real ``6s x 6s`` one-step map acting on ``(H_x, H_y, H_z, E_x, E_y, E_z)`` flattened x-fastest.

    ``tau`` may be negative (the adjoint step); it must not be zero.
    """
    s = grid.size
    if 6 * s > MAX_DENSE_UNKNOWNS:
        raise ConfigurationError(f"dense oracle limited to {MAX_DENSE_UNKNOWNS} unknowns, got {6 * s}")
    if tau == 0:
        raise ConfigurationError("dense update needs a nonzero time step")
    c = 1.0 / math.sqrt(eps * mu)
    D = dense_curl(grid)
    D2 = D @ D
    Dhat = np.zeros_like(D)
    power = D
    for cf in dhat_coefficients(tau, c, order):
        Dhat += cf * power
        power = power @ D2
    eye = np.eye(3 * s)
    A = np.block([[2 * mu / tau * eye, Dhat], [-Dhat, 2 * eps / tau * eye]])
    B = np.block([[2 * mu / tau * eye, -Dhat], [Dhat, 2 * eps / tau * eye]])
    return np.linalg.solve(A, B)


def step_dense(state: EMState, eps: float, mu: float, tau: float, order: int = 6) -> EMState:
    """One step by assembling and solving the full linear system (small grids only)."""
    if not tau > 0:
        raise ConfigurationError(f"time step must be positive, got {tau}")
    if (state.eps, state.mu) != (eps, mu):
        raise DimensionError("state material parameters differ from the requested ones")
    M = dense_update_matrix(state.grid, eps, mu, tau, order)
    new = (M @ state.stacked().ravel()).reshape((6,) + state.grid.shape)
    return state.replace(H=new[:3], E=new[3:], t=state.t + tau)
