"""Density reconstruction on the grid x_j = 2 pi j / M.

With G = g(t, e^{-ix}), 1 + 2 conj(G) = 2 pi (f + i Hf), so

    f(t, x) = (1 + 2 Re G) / (2 pi),    Hf(t, x) = -Im G / pi.
"""
import logging
from dataclasses import dataclass, field
from math import pi, sin
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.config import settings
from ..core.errors import InvalidArgumentError, NumericalFailureError
from ..core.logging import stage
from .flow import CharFlow, boundary_values
from .profiles import InitialProfile, check_alpha, flux

logger = logging.getLogger(__name__)

SATURATION_TOL = 1e-6


def grid_points(M: int) -> np.ndarray:
    return 2 * pi * np.arange(M) / M


def _check_grid(M: int) -> None:
    if M < 8 or M & (M - 1):
        raise InvalidArgumentError("grid size must be a power of two", M=M)


def hilbert_transform(f: Sequence[float]) -> np.ndarray:
    """Periodic Hilbert transform: multiplier -i sgn(k), mean and Nyquist modes to 0."""
    f = np.asarray(f, dtype=np.float64)
    M = f.shape[0]
    _check_grid(M)
    k = np.fft.fftfreq(M, d=1.0 / M)
    mult = -1j * np.sign(k)
    mult[M // 2] = 0.0
    return np.real(np.fft.ifft(np.fft.fft(f) * mult))


def spectral_derivative(f: Sequence[float]) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    M = f.shape[0]
    k = np.fft.fftfreq(M, d=1.0 / M)
    mult = 1j * k
    mult[M // 2] = 0.0
    return np.real(np.fft.ifft(np.fft.fft(f) * mult))


def trapezoid_mass(f: np.ndarray) -> float:
    """Periodic trapezoid rule over [0, 2 pi)."""
    return float(np.sum(f) * 2 * pi / f.shape[0])


@dataclass
class DensityGrid:
    t: float
    alpha: float
    x: np.ndarray
    f: np.ndarray
    hf: np.ndarray
    saturated_low: np.ndarray
    saturated_high: np.ndarray
    fronts: np.ndarray = field(repr=False)

    @property
    def M(self) -> int:
        return self.x.shape[0]

    @property
    def mass(self) -> float:
        return trapezoid_mass(self.f)

    def bounds_violation(self) -> float:
        """How far f leaves [0, 1/(2 pi alpha)]; 0 when inside."""
        upper = 1 / (2 * pi * self.alpha)
        return float(max(0.0, -self.f.min(), self.f.max() - upper))

    def fourier_moments(self, n_max: int) -> np.ndarray:
        """m_n = int e^{inx} f dx by the trapezoid rule."""
        return np.fft.ifft(self.f)[: n_max + 1] * 2 * pi

    def rows(self) -> List[tuple]:
        return [
            (self.t, float(x), float(f), int(lo), int(hi))
            for x, f, lo, hi in zip(self.x, self.f, self.saturated_low, self.saturated_high)
        ]


def saturation_set(f: np.ndarray, alpha: float, tol: float = SATURATION_TOL) -> Dict[str, np.ndarray]:
    """Grid markers where f sits at 0 or at 1/(2 pi alpha)."""
    alpha = check_alpha(alpha)
    f = np.asarray(f)
    return {"low": f <= tol, "high": f >= 1 / (2 * pi * alpha) - tol}


def boundary_g(t: float, flow: CharFlow, x: np.ndarray) -> tuple:
    """G = g(t, e^{-ix}) with the boundary-value diagnostics."""
    z = np.exp(-1j * np.asarray(x, dtype=np.float64))
    w, info = boundary_values(flow, t, z)
    G = flow.g0(w)
    if not np.all(np.isfinite(G)):
        bad = np.flatnonzero(~np.isfinite(G))
        raise NumericalFailureError(
            "density evaluation failed", diagnostics={"t": t, "grid_index": bad[:8].tolist(), "x": x[bad[:8]].tolist()}
        )
    return G, info


def density_at(t: float, flow: CharFlow, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if t == 0:
        return flow.profile.density(x)
    G, _ = boundary_g(t, flow, x)
    return (1 + 2 * G.real) / (2 * pi)


def density_reconstruct(t: float, flow: CharFlow, M: Optional[int] = None) -> DensityGrid:
    M = M or settings.DEFAULT_GRID
    _check_grid(M)
    if t <= 0:
        raise InvalidArgumentError("reconstruction needs t > 0", t=t)
    x = grid_points(M)
    with stage(logger, "density", t=t, M=M, profile=flow.profile.name) as info:
        G, bv = boundary_g(t, flow, x)
        f = (1 + 2 * G.real) / (2 * pi)
        hf = -G.imag / pi
        sat = saturation_set(f, flow.alpha)
        info["mass"] = trapezoid_mass(f)
        info["fronts"] = int(bv.front.sum())
    return DensityGrid(t=t, alpha=flow.alpha, x=x, f=f, hf=hf,
                       saturated_low=sat["low"], saturated_high=sat["high"], fronts=bv.front)


def hilbert_pair(t: float, flow: CharFlow, M: Optional[int] = None) -> tuple:
    grid = density_reconstruct(t, flow, M)
    return grid.f, grid.hf


def poisson_smoothed(profile: InitialProfile, r: float, M: int) -> tuple:
    """(P_r f0, P_r Hf0) on the grid from 1 + 2 g0(r e^{-ix})."""
    if not 0 < r < 1:
        raise InvalidArgumentError("Poisson radius must lie in (0, 1)", r=r)
    x = grid_points(M)
    G = profile.g0(r * np.exp(-1j * x))
    return (1 + 2 * G.real) / (2 * pi), -G.imag / pi


def pde_residual(t: float, flow: CharFlow, M: Optional[int], dt: float,
                 alpha: Optional[float] = None) -> float:
    """max |d_t f + d_x J_alpha f / (alpha sin pi alpha)| on the grid.

    Centered differences in t, spectral differentiation in x; refused when
    the density touches a saturation bound.
    """
    alpha = flow.alpha if alpha is None else check_alpha(alpha)
    if dt <= 0 or t - dt <= 0:
        raise InvalidArgumentError("need 0 < dt < t", t=t, dt=dt)
    now = density_reconstruct(t, flow, M)
    if np.any(now.saturated_low) or np.any(now.saturated_high):
        raise InvalidArgumentError(
            "density is saturated; the strong form is undefined at fronts",
            low=int(now.saturated_low.sum()), high=int(now.saturated_high.sum()),
        )
    ahead = density_reconstruct(t + dt, flow, M).f
    behind = density_reconstruct(t - dt, flow, M).f
    dfdt = (ahead - behind) / (2 * dt)
    dJ = spectral_derivative(flux(now.f, now.hf, alpha))
    return float(np.max(np.abs(dfdt + dJ / (alpha * sin(pi * alpha)))))


def sup_deviation(grid: DensityGrid) -> float:
    return float(np.max(np.abs(grid.f - 1 / (2 * pi))))


def relaxation_rate(flow: CharFlow, times: Sequence[float], M: Optional[int] = None) -> float:
    """Slope of log sup|f - 1/(2 pi)| against t."""
    times = list(times)
    if len(times) < 2:
        raise InvalidArgumentError("relaxation fit needs at least two times", times=times)
    dev = [sup_deviation(density_reconstruct(t, flow, M)) for t in times]
    return float(np.polyfit(times, np.log(dev), 1)[0])


def front_speed(flow: CharFlow, x0: float) -> Dict[str, float]:
    """Initial speed Im A0(w0) of a front at w0 = e^{i x0} and its critical time.

    The speed is dx/dt for profiles with real moments (symmetric f0). The
    critical time solves 1 + t w0 A0'(w0) = 0 and is reported only
    when it is real and positive.
    """
    w0 = np.exp(1j * x0)
    A = complex(flow.A0(np.array([w0]))[0])
    dA = complex(flow.profile.A0_prime(np.array([w0]))[0])
    denom = w0 * dA
    t_crit = float("nan")
    if abs(denom) > 0:
        cand = -1 / denom
        if abs(cand.imag) <= 1e-9 * max(1.0, abs(cand)) and cand.real > 0:
            t_crit = cand.real
    return {"x0": x0, "speed": A.imag, "critical_time": t_crit}
