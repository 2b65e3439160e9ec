"""TOML run configuration with fail-closed validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigurationError

SCENARIOS = ("benchmark", "custom")
SWEEPS = ("zone", "angles")

# section -> key -> (type check, default); a default of REQUIRED must be supplied
REQUIRED = object()
_INT = "int"
_NUM = "number"
_STR = "str"
_BOOL = "bool"
_INTS = "int list"
_NUMS = "number list"

SCHEMA: dict[str, dict[str, tuple[str, Any]]] = {
    "domain": {
        "bounds": (_NUMS, [0.0, 2.0, 0.0, 2.0, 0.0, 2.0]),
        "N": (_INTS, [16, 16, 16]),
        "N_list": (_INTS, [8, 16, 32]),
    },
    "time": {
        "tau": (_NUM, REQUIRED),
        "T": (_NUM, None),
        "n_steps": (_INT, None),
        "order": (_INT, 6),
        "tau_list": (_NUMS, [0.01, 0.005, 0.0025, 0.00125]),
    },
    "material": {
        "eps": (_NUM, 1.0),
        "mu": (_NUM, 1.0),
    },
    "benchmark": {
        "scenario": (_STR, "benchmark"),
        "k": (_INTS, [1, 2, -3]),
        "seed": (_INT, 0),
    },
    "dispersion": {
        "N": (_INT, 150),
        "h": (_NUM, 0.1),
        "S": (_NUM, 0.1),
        "c": (_NUM, 1.0),
        "order": (_INT, 6),
        "sweep": (_STR, "zone"),
        "counts": (_INTS, [9, 9, 9]),
        "magnitude": (_NUM, 2.5 * math.pi),
        "phi_count": (_INT, 9),
        "theta_count": (_INT, 17),
    },
    "output": {
        "dir": (_STR, "out"),
        "cadence": (_INT, 100),
        "wall_time": (_BOOL, True),
        "roundoff_floor": (_NUM, 1e-12),
        "threads": (_INT, 1),
    },
}


@dataclass(frozen=True)
class DispersionSettings:
    N: int = 150
    h: float = 0.1
    S: float = 0.1
    c: float = 1.0
    order: int = 6
    sweep: str = "zone"
    counts: tuple[int, int, int] = (9, 9, 9)
    magnitude: float = 2.5 * math.pi
    phi_count: int = 9
    theta_count: int = 17


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "benchmark"
    bounds: tuple[float, ...] = (0.0, 2.0) * 3
    counts: tuple[int, int, int] = (16, 16, 16)
    N_list: tuple[int, ...] = (8, 16, 32)
    eps: float = 1.0
    mu: float = 1.0
    tau: float = 0.01
    T: float = 1.0
    n_steps: int = 100
    order: int = 6
    tau_list: tuple[float, ...] = (0.01, 0.005, 0.0025, 0.00125)
    k: tuple[int, int, int] = (1, 2, -3)
    seed: int = 0
    cadence: int = 100
    out_dir: str = "out"
    threads: int = 1
    wall_time: bool = True
    roundoff_floor: float = 1e-12
    dispersion: DispersionSettings = field(default_factory=DispersionSettings)


def _check_type(key: str, kind: str, value: Any) -> Any:
    def is_int(v):
        return isinstance(v, int) and not isinstance(v, bool)

    def is_num(v):
        return (isinstance(v, (int, float)) and not isinstance(v, bool))

    ok = {
        _INT: is_int,
        _NUM: is_num,
        _STR: lambda v: isinstance(v, str),
        _BOOL: lambda v: isinstance(v, bool),
        _INTS: lambda v: is_int(v) or (isinstance(v, list) and v and all(is_int(x) for x in v)),
        _NUMS: lambda v: isinstance(v, list) and v and all(is_num(x) for x in v),
    }[kind](value)
    if not ok:
        raise ConfigurationError(f"{key}: expected {kind}, got {value!r}")
    if kind == _NUM:
        value = float(value)
        if not math.isfinite(value):
            raise ConfigurationError(f"{key}: must be finite")
    if kind == _NUMS:
        value = [float(x) for x in value]
    return value


def _resolve(doc: dict) -> dict[str, dict[str, Any]]:
    unknown = set(doc) - set(SCHEMA)
    if unknown:
        raise ConfigurationError(f"unknown section(s): {', '.join(sorted(unknown))}")
    out: dict[str, dict[str, Any]] = {}
    for sec, keys in SCHEMA.items():
        given = doc.get(sec, {})
        if not isinstance(given, dict):
            raise ConfigurationError(f"[{sec}] must be a table")
        bad = set(given) - set(keys)
        if bad:
            raise ConfigurationError(f"unknown key(s) in [{sec}]: {', '.join(sorted(bad))}")
        vals = {}
        for key, (kind, default) in keys.items():
            name = f"{sec}.{key}"
            if key in given:
                vals[key] = _check_type(name, kind, given[key])
            elif default is REQUIRED:
                raise ConfigurationError(f"missing required key {name}")
            else:
                vals[key] = default
        out[sec] = vals
    return out


def _even_counts(name: str, values) -> tuple[int, ...]:
    for n in values:
        if n < 4 or n % 2:
            raise ConfigurationError(f"{name} = {n}: point counts must be even integers >= 4")
    return tuple(values)


def _positive(name: str, value: float) -> float:
    if not value > 0:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def parse_config(text: str) -> RunConfig:
    """Parse and validate a TOML document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed TOML: {exc}") from exc
    v = _resolve(doc)
    dom, tm, mat, bm, dsp, out = (v[s] for s in ("domain", "time", "material", "benchmark", "dispersion", "output"))

    N = dom["N"]
    counts = _even_counts("domain.N", [N] * 3 if isinstance(N, int) else N)
    if len(counts) != 3:
        raise ConfigurationError("domain.N must be one integer or a list of three")
    n_list = _even_counts("domain.N_list", [dom["N_list"]] if isinstance(dom["N_list"], int) else dom["N_list"])
    bounds = tuple(dom["bounds"])
    if len(bounds) != 6 or any(hi <= lo for lo, hi in zip(bounds[::2], bounds[1::2])):
        raise ConfigurationError("domain.bounds must list six values with x_R > x_L, y_R > y_L, z_R > z_L")

    tau = _positive("time.tau", tm["tau"])
    T, n_steps = tm["T"], tm["n_steps"]
    if n_steps is not None and n_steps < 0:
        raise ConfigurationError(f"time.n_steps must be >= 0, got {n_steps}")
    if T is not None and T < 0:
        raise ConfigurationError(f"time.T must be >= 0, got {T}")
    if T is None and n_steps is None:
        T = 1.0
    if n_steps is None:
        n_steps = round(T / tau)
        if abs(n_steps * tau - T) > 1e-9 * max(T, tau):
            raise ConfigurationError(f"time.T = {T} is not an integer multiple of time.tau = {tau}")
    elif T is None:
        T = n_steps * tau
    elif abs(n_steps * tau - T) > 1e-9 * max(T, tau):
        raise ConfigurationError(f"inconsistent time settings: n_steps * tau = {n_steps * tau:g} but T = {T:g}")
    order = tm["order"]
    if order not in (2, 4, 6):
        raise ConfigurationError(f"time.order must be 2, 4 or 6, got {order}")
    tau_list = tuple(_positive("time.tau_list", t) for t in tm["tau_list"])

    eps = _positive("material.eps", mat["eps"])
    mu = _positive("material.mu", mat["mu"])

    scenario = bm["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"benchmark.scenario must be one of {SCENARIOS}, got {scenario!r}")
    k = bm["k"]
    if isinstance(k, int) or len(k) != 3:
        raise ConfigurationError("benchmark.k must be a list of three integers")
    if scenario == "benchmark":
        if bounds != (0.0, 2.0) * 3:
            raise ConfigurationError("domain.bounds: the benchmark scenario is defined on [0, 2]^3")
        if sum(k) != 0 or not any(k):
            raise ConfigurationError(f"benchmark.k = {k}: needs k_x + k_y + k_z = 0 and not all zero")

    if dsp["order"] not in (2, 4, 6):
        raise ConfigurationError(f"dispersion.order must be 2, 4 or 6, got {dsp['order']}")
    if dsp["sweep"] not in SWEEPS:
        raise ConfigurationError(f"dispersion.sweep must be one of {SWEEPS}, got {dsp['sweep']!r}")
    _even_counts("dispersion.N", [dsp["N"]])
    dcounts = dsp["counts"]
    dcounts = [dcounts] * 3 if isinstance(dcounts, int) else dcounts
    if len(dcounts) != 3 or any(n < 1 for n in dcounts):
        raise ConfigurationError("dispersion.counts must be one positive integer or a list of three")
    for key in ("h", "S", "c", "magnitude"):
        _positive(f"dispersion.{key}", dsp[key])
    for key in ("phi_count", "theta_count"):
        if dsp[key] < 1:
            raise ConfigurationError(f"dispersion.{key} must be >= 1")
    disp = DispersionSettings(
        dsp["N"], dsp["h"], dsp["S"], dsp["c"], dsp["order"], dsp["sweep"], tuple(dcounts),
        dsp["magnitude"], dsp["phi_count"], dsp["theta_count"],
    )

    if out["cadence"] < 1:
        raise ConfigurationError("output.cadence must be >= 1")
    if out["threads"] < 1:
        raise ConfigurationError("output.threads must be >= 1")

    return RunConfig(
        scenario=scenario, bounds=bounds, counts=counts, N_list=n_list, eps=eps, mu=mu,
        tau=tau, T=float(T), n_steps=int(n_steps), order=order, tau_list=tau_list,
        k=tuple(k), seed=bm["seed"], cadence=out["cadence"], out_dir=out["dir"],
        threads=out["threads"], wall_time=out["wall_time"],
        roundoff_floor=_positive("output.roundoff_floor", out["roundoff_floor"]),
        dispersion=disp,
    )


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigurationError(f"{path}: not valid UTF-8") from exc
    return parse_config(text)
