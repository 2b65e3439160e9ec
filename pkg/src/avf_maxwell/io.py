"""CSV tables and binary field snapshots."""

from __future__ import annotations

import math
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError
from .grid import EMState, GridSpec

CONVERGE_COLUMNS = ("tau", "Linf", "L2", "rate", "wall_s")
SPATIAL_COLUMNS = ("N", "Linf", "L2", "wall_s")
INVARIANT_COLUMNS = (
    "t", "E1", "E2", "E3", "E4x", "E4y", "E4z", "E5x", "E5y", "E5z",
    "Mx", "My", "Mz", "divE_inf", "divH_inf",
)
DISPERSION_COLUMNS = (
    "kx", "ky", "kz", "abs_lambda_max", "omega_num", "omega_exact", "vp_norm",
    "vgx", "vgy", "vgz", "vg_mag", "alpha", "beta",
)
RUN_COLUMNS = ("step", "t", "E2", "Linf", "L2")


def format_value(v) -> str:
    """17 significant digits for floats (round-trip exact), ``nan`` for missing."""
    if v is None:
        return "nan"
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return "%.17g" % v


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write a header plus rows; returns the number of data rows."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row has {len(row)} fields, header has {len(columns)}")
            fh.write(",".join(format_value(v) for v in row) + "\n")
            n += 1
    return n


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


# --- snapshots -------------------------------------------------------------

def write_snapshot(state: EMState, stem) -> tuple[Path, Path]:
    """Write ``<stem>.bin`` (little-endian float64; E_x, E_y, E_z, H_x, H_y, H_z,
    each x-fastest) and a ``<stem>.txt`` sidecar with grid and time."""
    stem = Path(stem)
    data = np.concatenate([state.E, state.H]).astype("<f8", copy=False)
    bin_path = stem.with_suffix(".bin")
    txt_path = stem.with_suffix(".txt")
    bin_path.write_bytes(np.ascontiguousarray(data).tobytes(order="C"))
    g = state.grid
    lines = [
        "format = float64 little-endian, components E_x E_y E_z H_x H_y H_z, x fastest",
        "bounds = " + " ".join(format_value(b) for b in g.bounds),
        "counts = " + " ".join(str(n) for n in g.counts),
        f"t = {format_value(state.t)}",
        f"eps = {format_value(state.eps)}",
        f"mu = {format_value(state.mu)}",
    ]
    txt_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return bin_path, txt_path


def read_snapshot(stem) -> EMState:
    stem = Path(stem)
    meta = {}
    for line in stem.with_suffix(".txt").read_text(encoding="utf-8").splitlines():
        key, _, val = line.partition("=")
        meta[key.strip()] = val.strip()
    try:
        bounds = tuple(float(x) for x in meta["bounds"].split())
        counts = tuple(int(x) for x in meta["counts"].split())
        t, eps, mu = float(meta["t"]), float(meta["eps"]), float(meta["mu"])
    except (KeyError, ValueError) as exc:
        raise ConfigurationError(f"malformed snapshot sidecar {stem}.txt") from exc
    grid = GridSpec(bounds, counts)
    raw = np.frombuffer(stem.with_suffix(".bin").read_bytes(), dtype="<f8")
    if raw.size != 6 * grid.size:
        raise ConfigurationError(f"snapshot holds {raw.size} values, expected {6 * grid.size}")
    fields = raw.reshape((6,) + grid.shape).astype(float)
    return EMState(grid, fields[:3], fields[3:], t, eps, mu)


def ensure_dir(path) -> Path:
    p = Path(path)
    os.makedirs(p, exist_ok=True)
    return p
