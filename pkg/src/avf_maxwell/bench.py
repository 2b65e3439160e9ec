"""Standing-wave benchmark on ``[0, 2]^3`` and the studies built on it.

The exact solution is

    E_x = (k_y - k_z)/(eps w) cos(w pi t) cos(k_x pi x) sin(k_y pi y) sin(k_z pi z)
    H_x = sin(w pi t) sin(k_x pi x) cos(k_y pi y) cos(k_z pi z)

with cyclic permutations for the other components. It solves Maxwell's
equations when ``k_x + k_y + k_z = 0`` and ``w = sqrt(|k|^2 / (eps mu))``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .diagnostics import ErrorReport, InvariantRecord, convergence_rate, error_norms, invariants
from .errors import ConfigurationError
from .grid import EMState, GridSpec, cube_grid
from .stepper import build_plan, step

DOMAIN = (0.0, 2.0)
ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class BenchmarkParams:
    k: tuple[int, int, int] = (1, 2, -3)
    eps: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        k = tuple(self.k)
        if len(k) != 3 or any(int(v) != v for v in k):
            raise ConfigurationError(f"mode numbers must be three integers, got {self.k}")
        if k == (0, 0, 0):
            raise ConfigurationError("mode numbers must not all vanish")
        if sum(k) != 0:
            raise ConfigurationError(f"exact solution needs k_x + k_y + k_z = 0, got {k}")
        if not (self.eps > 0 and self.mu > 0):
            raise ConfigurationError("eps and mu must be positive")
        object.__setattr__(self, "k", tuple(int(v) for v in k))

    @property
    def w(self) -> float:
        """Temporal frequency in units of pi."""
        return math.sqrt(sum(v * v for v in self.k) / (self.eps * self.mu))

    @property
    def omega(self) -> float:
        return math.pi * self.w


def benchmark_grid(n: int) -> GridSpec:
    return cube_grid(DOMAIN[0], DOMAIN[1], n)


def _check_domain(grid: GridSpec) -> None:
    if grid.bounds != DOMAIN * 3:
        raise ConfigurationError(f"benchmark lives on [0, 2]^3, got bounds {grid.bounds}")


def exact_fields(params: BenchmarkParams, grid: GridSpec, t: float) -> tuple[np.ndarray, np.ndarray]:
    """``(E, H)`` of the exact solution sampled at the collocation points."""
    _check_domain(grid)
    kx, ky, kz = params.k
    x, y, z = grid.mesh()
    sx, cx = np.sin(kx * np.pi * x), np.cos(kx * np.pi * x)
    sy, cy = np.sin(ky * np.pi * y), np.cos(ky * np.pi * y)
    sz, cz = np.sin(kz * np.pi * z), np.cos(kz * np.pi * z)
    amp = math.cos(params.omega * t) / (params.eps * params.w)
    st = math.sin(params.omega * t)
    E = np.stack([
        (ky - kz) * amp * cx * sy * sz,
        (kz - kx) * amp * sx * cy * sz,
        (kx - ky) * amp * sx * sy * cz,
    ])
    H = np.stack([st * sx * cy * cz, st * cx * sy * cz, st * cx * cy * sz])
    return E, H


def exact_state(params: BenchmarkParams, grid: GridSpec, t: float = 0.0) -> EMState:
    E, H = exact_fields(params, grid, t)
    return EMState(grid, E, H, t, params.eps, params.mu)


def exact_sampler(params: BenchmarkParams):
    return lambda grid, t: exact_state(params, grid, t)


def step_count(T: float, tau: float) -> int:
    """Number of steps covering ``[0, T]``; ``T/tau`` must be an integer."""
    if not (tau > 0 and T >= 0):
        raise ConfigurationError(f"need tau > 0 and T >= 0, got tau={tau}, T={T}")
    n = round(T / tau)
    if abs(n * tau - T) > 1e-9 * max(T, tau):
        raise ConfigurationError(f"T = {T} is not an integer multiple of tau = {tau}")
    return n


def _advance(state: EMState, plan, n: int) -> EMState:
    for i in range(n):
        state = step(state, plan)
    # the accumulated t carries round-off; pin it to the exact level
    return state.replace(t=n * plan.tau)


@dataclass(frozen=True)
class ConvergenceRow:
    tau: float
    Linf: float
    L2: float
    rate: float
    wall_s: float


@dataclass(frozen=True)
class SpatialRow:
    N: int
    Linf: float
    L2: float
    wall_s: float


def run_benchmark(
    params: BenchmarkParams, n: int, tau: float, T: float, order: int = 6, storage: str = "auto"
) -> tuple[ErrorReport, float]:
    """Single benchmark run; returns the error at ``T`` and the wall time."""
    grid = benchmark_grid(n)
    steps = step_count(T, tau)
    t0 = time.perf_counter()
    plan = build_plan(grid, params.eps, params.mu, tau, order, storage)
    final = _advance(exact_state(params, grid, 0.0), plan, steps)
    wall = time.perf_counter() - t0
    return error_norms(final, exact_sampler(params)), wall


def temporal_convergence_study(
    params: BenchmarkParams,
    N: int,
    tau_list: Sequence[float],
    T: float,
    order: int = 6,
    roundoff_floor: float = ROUNDOFF_FLOOR,
) -> list[ConvergenceRow]:
    """One run per step size. ``rate`` compares the L2 error with the previous
    row and is nan for the first row or once the finer error sits below
    ``roundoff_floor``."""
    for tau in tau_list:
        step_count(T, tau)
    rows: list[ConvergenceRow] = []
    for tau in tau_list:
        err, wall = run_benchmark(params, N, tau, T, order)
        rate = math.nan
        if rows and err.L2 >= roundoff_floor and rows[-1].L2 > 0:
            rate = convergence_rate(rows[-1].L2, err.L2, rows[-1].tau, tau)
        rows.append(ConvergenceRow(tau, err.Linf, err.L2, rate, wall))
    return rows


def spatial_accuracy_study(
    params: BenchmarkParams, N_list: Sequence[int], tau: float, T: float, order: int = 6
) -> list[SpatialRow]:
    step_count(T, tau)
    rows = []
    for n in N_list:
        err, wall = run_benchmark(params, n, tau, T, order)
        rows.append(SpatialRow(int(n), err.Linf, err.L2, wall))
    return rows


def invariant_drift_study(
    params: BenchmarkParams,
    N: int,
    tau: float,
    T: float,
    cadence: int | None = 1,
    order: int = 6,
    include_initial: bool = True,
) -> Iterator[InvariantRecord]:
    """Run the benchmark and yield invariant records every ``cadence`` steps.

    With ``cadence=None`` only the final level is reported (plus the initial
    one when ``include_initial``).
    """
    if cadence is not None and cadence < 1:
        raise ConfigurationError(f"cadence must be a positive integer or None, got {cadence}")
    grid = benchmark_grid(N)
    steps = step_count(T, tau)
    plan = build_plan(grid, params.eps, params.mu, tau, order)
    state = exact_state(params, grid, 0.0)
    if include_initial:
        yield invariants(state)
    for i in range(1, steps + 1):
        prev, state = state, step(state, plan)
        state = state.replace(t=i * tau)
        due = (i == steps) if cadence is None else (i % cadence == 0)
        if due:
            yield invariants(state, prev, tau)
