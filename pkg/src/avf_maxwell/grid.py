"""Periodic 3D grids, field layout and the discrete inner products.

Fields are plain numpy arrays. A scalar field has shape ``grid.shape``,
which is ``(N_z, N_y, N_x)`` in C order, so ``u.ravel()`` is the canonical
x-fastest vector with flat index ``N_x*N_y*m + N_x*k + j`` (0-based).
A vector field stacks the x, y, z components along a leading axis of
length 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DimensionError

AXES = ("x", "y", "z")
MIN_POINTS = 4


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic partition of a cuboid.

    Collocation point ``j`` on axis ``w`` sits at ``w_L + j*h_w`` for
    ``j = 0..N_w-1``; the right endpoint is identified with the left one.
    """

    bounds: tuple[float, float, float, float, float, float]
    counts: tuple[int, int, int]
    h: tuple[float, float, float] = field(init=False)
    mu: tuple[float, float, float] = field(init=False)

    def __post_init__(self):
        if len(self.bounds) != 6 or len(self.counts) != 3:
            raise ConfigurationError("need 6 bounds and 3 point counts")
        lengths = []
        for ax, (lo, hi) in zip(AXES, zip(self.bounds[::2], self.bounds[1::2])):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise ConfigurationError(f"degenerate bounds on axis {ax}: [{lo}, {hi}]")
            lengths.append(hi - lo)
        for ax, n in zip(AXES, self.counts):
            if int(n) != n or n < MIN_POINTS or n % 2:
                raise ConfigurationError(
                    f"N_{ax} = {n}: point counts must be even integers >= {MIN_POINTS}"
                )
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        object.__setattr__(self, "counts", tuple(int(n) for n in self.counts))
        object.__setattr__(self, "h", tuple(L / n for L, n in zip(lengths, self.counts)))
        object.__setattr__(self, "mu", tuple(2.0 * math.pi / L for L in lengths))

    @property
    def lengths(self) -> tuple[float, float, float]:
        b = self.bounds
        return (b[1] - b[0], b[3] - b[2], b[5] - b[4])

    @property
    def shape(self) -> tuple[int, int, int]:
        """Array shape of a scalar field, ``(N_z, N_y, N_x)``."""
        nx, ny, nz = self.counts
        return (nz, ny, nx)

    @property
    def size(self) -> int:
        nx, ny, nz = self.counts
        return nx * ny * nz

    @property
    def cell_volume(self) -> float:
        hx, hy, hz = self.h
        return hx * hy * hz

    def axis_points(self, axis: int) -> np.ndarray:
        """1D collocation coordinates along ``axis`` (0=x, 1=y, 2=z)."""
        lo = self.bounds[2 * axis]
        return lo + self.h[axis] * np.arange(self.counts[axis])

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coordinate arrays ``(X, Y, Z)``, each of shape ``self.shape``."""
        z, y, x = np.meshgrid(
            self.axis_points(2), self.axis_points(1), self.axis_points(0), indexing="ij"
        )
        return x, y, z

    def flat_index(self, j: int, k: int, m: int) -> int:
        nx, ny, _ = self.counts
        return nx * ny * m + nx * k + j

    def unflatten_index(self, idx: int) -> tuple[int, int, int]:
        nx, ny, _ = self.counts
        m, rem = divmod(idx, nx * ny)
        k, j = divmod(rem, nx)
        return j, k, m


def build_grid(bounds: Sequence[float], counts: Sequence[int]) -> GridSpec:
    """Grid on ``[x_L,x_R]x[y_L,y_R]x[z_L,z_R]`` with ``counts`` points per axis."""
    return GridSpec(tuple(bounds), tuple(counts))


def cube_grid(lo: float, hi: float, n: int) -> GridSpec:
    return GridSpec((lo, hi) * 3, (n, n, n))


def _check_pair(grid: GridSpec, u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise DimensionError(f"shape mismatch: {u.shape} vs {v.shape}")
    if u.shape[-3:] != grid.shape:
        raise DimensionError(f"field shape {u.shape} does not match grid {grid.shape}")


def inner_product_h(grid: GridSpec, u: np.ndarray, v: np.ndarray) -> float:
    """``h_x h_y h_z * sum(u * conj(v))`` over all points (and components)."""
    u = np.asarray(u)
    v = np.asarray(v)
    _check_pair(grid, u, v)
    s = np.vdot(v, u) if np.iscomplexobj(u) or np.iscomplexobj(v) else np.dot(u.ravel(), v.ravel())
    return grid.cell_volume * s


def norm_h(grid: GridSpec, u: np.ndarray) -> float:
    return math.sqrt(max(inner_product_h(grid, u, u).real, 0.0))


def norm_inf(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.abs(u).max()) if u.size else 0.0


def sample(f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray], grid: GridSpec) -> np.ndarray:
    """Evaluate ``f(x, y, z)`` at every collocation point.

    ``f`` is called once with coordinate arrays; constant results broadcast.
    """
    x, y, z = grid.mesh()
    out = np.broadcast_to(np.asarray(f(x, y, z), dtype=float), grid.shape)
    return np.array(out)


def zeros_vector(grid: GridSpec) -> np.ndarray:
    return np.zeros((3,) + grid.shape)


@dataclass(frozen=True)
class EMState:
    """Electric and magnetic fields at one time level.

    ``E`` and ``H`` are vector fields of shape ``(3,) + grid.shape``.
    """

    grid: GridSpec
    E: np.ndarray
    H: np.ndarray
    t: float = 0.0
    eps: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        want = (3,) + self.grid.shape
        for name in ("E", "H"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != want:
                raise DimensionError(f"{name} has shape {arr.shape}, expected {want}")
            object.__setattr__(self, name, arr)
        if not (self.eps > 0 and self.mu > 0):
            raise ConfigurationError("eps and mu must be positive")

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.eps * self.mu)

    def replace(self, **changes) -> "EMState":
        kw = dict(grid=self.grid, E=self.E, H=self.H, t=self.t, eps=self.eps, mu=self.mu)
        kw.update(changes)
        return EMState(**kw)

    def stacked(self) -> np.ndarray:
        """``(H, E)`` as one ``(6,) + grid.shape`` array."""
        return np.concatenate([self.H, self.E])

    def check_compatible(self, other: "EMState") -> None:
        if self.grid != other.grid:
            raise DimensionError("states live on different grids")
        if (self.eps, self.mu) != (other.eps, other.mu):
            raise DimensionError("states have different material parameters")


def zero_state(grid: GridSpec, eps: float = 1.0, mu: float = 1.0, t: float = 0.0) -> EMState:
    return EMState(grid, zeros_vector(grid), zeros_vector(grid), t, eps, mu)
