"""Discrete invariants, error norms and convergence rates.

All functionals use the spectral operators of :mod:`avf_maxwell.spectral`
and the grid inner product ``<u, v>_h``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Callable

import numpy as np

from .errors import DimensionError
from .grid import EMState, inner_product_h, norm_inf
from .spectral import _fft3, _ifft3, curl, divergence_scaled, to_real, wavenumbers

AXIS_SUFFIX = ("x", "y", "z")


@dataclass(frozen=True)
class InvariantRecord:
    """Invariant values at one time level.

    ``E3`` and ``E5*`` need the previous level and are ``None`` without it.
    """

    t: float
    E1: float
    E2: float
    E3: float | None
    E4x: float
    E4y: float
    E4z: float
    E5x: float | None
    E5y: float | None
    E5z: float | None
    Mx: float
    My: float
    Mz: float
    divE_inf: float
    divH_inf: float

    @classmethod
    def columns(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def E4(self) -> tuple[float, float, float]:
        return (self.E4x, self.E4y, self.E4z)

    @property
    def M(self) -> tuple[float, float, float]:
        return (self.Mx, self.My, self.Mz)

    @property
    def has_differences(self) -> bool:
        return self.E3 is not None


@dataclass(frozen=True)
class ErrorReport:
    L2: float
    Linf: float
    rate: float | None = None


def _axis_derivatives(state: EMState, v: np.ndarray) -> list[np.ndarray]:
    """``[D_x v, D_y v, D_z v]`` applied componentwise to a vector field."""
    tab = wavenumbers(state.grid)
    vh = _fft3(v)
    scale = float(np.abs(v).max(initial=0.0))
    out = []
    for a in range(3):
        lam = tab.broadcast(a)
        out.append(to_real(_ifft3(lam * vh), float(np.abs(lam).max()) * scale))
    return out


def _seminorms(state: EMState, H: np.ndarray, E: np.ndarray) -> tuple[float, ...]:
    """``mu ||H||_{D_w}^2 + eps ||E||_{D_w}^2`` for w = x, y, z."""
    g = state.grid
    dH = _axis_derivatives(state, H)
    dE = _axis_derivatives(state, E)
    return tuple(
        float(state.mu * inner_product_h(g, dH[a], dH[a]) + state.eps * inner_product_h(g, dE[a], dE[a]))
        for a in range(3)
    )


def divergence_norms(state: EMState) -> tuple[float, float]:
    """``(||div(eps E)||_inf, ||div(mu H)||_inf)``."""
    g = state.grid
    return (
        norm_inf(divergence_scaled(g, state.E, state.eps)),
        norm_inf(divergence_scaled(g, state.H, state.mu)),
    )


def invariants(state: EMState, prev_state: EMState | None = None, tau: float | None = None) -> InvariantRecord:
    """Evaluate every discrete invariant at ``state``.

    When ``prev_state`` is given, the difference-quotient energies use
    ``(state - prev_state) / tau``; ``tau`` defaults to the time gap.
    """
    g = state.grid
    eps, mu = state.eps, state.mu
    H, E = state.H, state.E

    e1 = inner_product_h(g, H, curl(g, H)) / (2 * eps) + inner_product_h(g, E, curl(g, E)) / (2 * mu)
    e2 = 0.5 * mu * inner_product_h(g, H, H) + 0.5 * eps * inner_product_h(g, E, E)
    e4 = _seminorms(state, H, E)
    dE = _axis_derivatives(state, E)
    mom = tuple(float(inner_product_h(g, H, dE[a])) for a in range(3))
    div_e, div_h = divergence_norms(state)

    e3 = None
    e5 = (None, None, None)
    if prev_state is not None:
        state.check_compatible(prev_state)
        if tau is None:
            tau = state.t - prev_state.t
        if not tau > 0:
            raise DimensionError(f"difference quotient needs tau > 0, got {tau}")
        dH_t = (H - prev_state.H) / tau
        dE_t = (E - prev_state.E) / tau
        e3 = float(0.5 * mu * inner_product_h(g, dH_t, dH_t) + 0.5 * eps * inner_product_h(g, dE_t, dE_t))
        e5 = _seminorms(state, dH_t, dE_t)

    return InvariantRecord(
        state.t, float(e1), float(e2), e3, *e4, *e5, *mom, div_e, div_h
    )


# --- drift ----------------------------------------------------------------

def reference_scales(ref: InvariantRecord, eps: float, mu: float) -> dict[str, float]:
    """Normalisers for relative drift, taken from a reference record.

    Definite invariants use their own magnitude. ``E1`` and ``M_w`` are
    indefinite and vanish for symmetric data, so they are normalised by
    their Cauchy-Schwarz bounds ``sqrt(E2*E4)/(eps*mu)`` and
    ``sqrt(2*E2*E4w/(eps*mu))`` (both are themselves conserved).
    """
    e4 = sum(ref.E4)
    tiny = 1e-30
    out = {
        "E1": max(abs(ref.E1), math.sqrt(ref.E2 * e4) / (eps * mu), tiny),
        "E2": max(abs(ref.E2), tiny),
    }
    for i, w in enumerate(AXIS_SUFFIX):
        out[f"E4{w}"] = max(ref.E4[i], tiny)
        out[f"M{w}"] = max(abs(ref.M[i]), math.sqrt(2 * ref.E2 * ref.E4[i] / (eps * mu)), tiny)
    if ref.has_differences:
        out["E3"] = max(ref.E3, tiny)
        for w in AXIS_SUFFIX:
            out[f"E5{w}"] = max(getattr(ref, f"E5{w}"), tiny)
    return out


def relative_drift(rec: InvariantRecord, ref: InvariantRecord, scales: dict[str, float]) -> dict[str, float]:
    """``|I(rec) - I(ref)| / scale`` for each invariant present in both records."""
    out = {}
    for name, s in scales.items():
        a, b = getattr(rec, name), getattr(ref, name)
        if a is None or b is None:
            continue
        out[name] = abs(a - b) / s
    return out


# --- errors ---------------------------------------------------------------

ExactSampler = Callable[[object, float], EMState]


def error_norms(state: EMState, exact_sampler: ExactSampler) -> ErrorReport:
    """Weighted errors against the exact solution at ``state.t``.

    ``Linf = max(||mu (H - H_n)||_inf, ||eps (E - E_n)||_inf)`` and
    ``L2 = sqrt(mu ||H - H_n||_h^2 + eps ||E - E_n||_h^2)``.
    """
    ex = exact_sampler(state.grid, state.t)
    if ex.grid != state.grid:
        raise DimensionError("exact sampler returned a state on a different grid")
    g = state.grid
    dH = ex.H - state.H
    dE = ex.E - state.E
    linf = max(norm_inf(state.mu * dH), norm_inf(state.eps * dE))
    l2 = math.sqrt(state.mu * inner_product_h(g, dH, dH) + state.eps * inner_product_h(g, dE, dE))
    return ErrorReport(L2=l2, Linf=linf)


def convergence_rate(err1: float, err2: float, tau1: float, tau2: float) -> float:
    """Observed order ``ln(err1/err2) / ln(tau1/tau2)``."""
    if not (err1 > 0 and err2 > 0):
        raise ValueError(f"errors must be positive, got {err1}, {err2}")
    if not (tau1 > 0 and tau2 > 0) or tau1 == tau2:
        raise ValueError(f"step sizes must be positive and distinct, got {tau1}, {tau2}")
    return math.log(err1 / err2) / math.log(tau1 / tau2)
