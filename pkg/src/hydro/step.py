"""Closed-form analysis of the step and single-mode initial profiles."""
import logging
from dataclasses import dataclass
from math import cos, pi, sin, sqrt
from typing import Dict, Optional, Tuple

import numpy as np

from ..core.errors import InvalidArgumentError
from .flow import CharFlow
from .profiles import StepProfile, check_alpha, single_mode

logger = logging.getLogger(__name__)

REGIME_TOL = 1e-12


@dataclass(frozen=True)
class StepProfileData:
    alpha: float
    t_lower: float
    t_upper: float

    @property
    def w_alpha(self) -> complex:
        return complex(np.exp(1j * pi * self.alpha))

    @property
    def flow(self) -> CharFlow:
        return CharFlow(StepProfile(alpha=self.alpha))

    def as_dict(self, t: Optional[float] = None) -> dict:
        out = {"alpha": self.alpha, "t_lower": self.t_lower, "t_upper": self.t_upper}
        if t is not None:
            phi1, phi2 = step_fronts(self.alpha, t)
            roots = step_critical_points(self.alpha, t)
            out.update({
                "t": t,
                "regime": regime(self.alpha, t),
                "phi1": phi1,
                "phi2": phi2,
                "critical_points": [[float(r.real), float(r.imag)] for r in roots],
            })
        return out


def critical_times(alpha: float) -> Tuple[float, float]:
    """(t_*, t^*): min and max of (1 -+ cos(pi alpha)) / (2 pi^2)."""
    alpha = check_alpha(alpha)
    c = cos(pi * alpha)
    a, b = (1 - c) / (2 * pi ** 2), (1 + c) / (2 * pi ** 2)
    return min(a, b), max(a, b)


def step_profile(alpha: float) -> StepProfileData:
    lo, hi = critical_times(alpha)
    prof = StepProfile(alpha=alpha)
    prof.check_branch()
    return StepProfileData(alpha=prof.alpha, t_lower=lo, t_upper=hi)


def quartic_coefficients(alpha: float, t: float) -> np.ndarray:
    """[1, a, b, a, 1] with a = 4 cos(pi alpha)(pi^2 t - 1), b = 4 cos^2(pi alpha) + 2 - 8 pi^2 t."""
    c = cos(pi * alpha)
    a = 4 * c * (pi ** 2 * t - 1)
    b = 4 * c * c + 2 - 8 * pi ** 2 * t
    return np.array([1.0, a, b, a, 1.0])


def saddle_W(alpha: float, t: float) -> Tuple[float, float]:
    """W = (w + 1/w) / 2 at the critical points: W+ >= W-."""
    c, s = cos(pi * alpha), sin(pi * alpha)
    root = sqrt(pi ** 2 * t * (pi ** 2 * c * c * t + 2 * s * s))
    return c * (1 - pi ** 2 * t) + root, c * (1 - pi ** 2 * t) - root


def _roots_from_W(W: float) -> Tuple[complex, complex]:
    d = np.sqrt(complex(W * W - 1))
    return complex(W + d), complex(W - d)


def step_critical_points(alpha: float, t: float) -> np.ndarray:
    """Zeros of Phi_t' for the step flow: the four roots of the palindromic quartic."""
    alpha = check_alpha(alpha)
    if t < 0:
        raise InvalidArgumentError("time must be nonnegative", t=t)
    if alpha > 0.5:
        return -step_critical_points(1 - alpha, t)
    Wp, Wm = saddle_W(alpha, t)
    return np.array([*_roots_from_W(Wp), *_roots_from_W(Wm)])


def quartic_residual(alpha: float, t: float) -> float:
    roots = step_critical_points(alpha, t)
    return float(np.max(np.abs(np.polyval(quartic_coefficients(alpha, t), roots))))


def _unit_root(W: float) -> complex:
    return complex(W, sqrt(max(0.0, 1 - W * W)))


def step_fronts(alpha: float, t: float) -> Tuple[Optional[float], Optional[float]]:
    """(phi_1, phi_2): plateau edge while t < t_*, support edge while t < t^*.

    Each front is |arg Phi_t(zeta)| at the unit-circle critical point zeta
    in the upper half plane; expired fronts are None.
    """
    alpha = check_alpha(alpha)
    if alpha > 0.5:
        raise InvalidArgumentError("fronts are computed for alpha <= 1/2", alpha=alpha)
    if t <= 0:
        return pi * alpha, pi * alpha
    lo, hi = critical_times(alpha)
    flow = CharFlow(StepProfile(alpha=alpha))
    Wp, Wm = saddle_W(alpha, t)
    phi1 = phi2 = None
    if t < lo:
        phi1 = float(abs(np.angle(flow.phi(t, np.array([_unit_root(Wp)]))[0])))
    if t < hi:
        phi2 = float(abs(np.angle(flow.phi(t, np.array([_unit_root(Wm)]))[0])))
    return phi1, phi2


def regime(alpha: float, t: float) -> str:
    """Position of t relative to (t_*, t^*)."""
    lo, hi = critical_times(alpha)
    tol = REGIME_TOL * max(1.0, hi)
    if abs(t - lo) <= tol and abs(t - hi) <= tol:
        return "critical"
    if abs(t - lo) <= tol:
        return "at_lower"
    if abs(t - hi) <= tol:
        return "at_upper"
    if t < lo:
        return "saturated"
    if t < hi:
        return "support_only"
    return "analytic"


@dataclass(frozen=True)
class SingleModeData:
    p: int
    flow: CharFlow

    @property
    def critical_time(self) -> float:
        return 1 / (self.p * pi ** 3)

    def critical_points(self) -> np.ndarray:
        """The 2p-th roots of unity, where Phi' vanishes at t = critical_time."""
        return np.exp(1j * pi * np.arange(2 * self.p) / self.p)

    def derivative_at_critical(self) -> float:
        w = self.critical_points()
        return float(np.max(np.abs(self.flow.phi_prime(self.critical_time, w))))

    def as_dict(self) -> Dict[str, float]:
        return {"p": self.p, "alpha": 0.5, "critical_time": self.critical_time}


def single_mode_profile(p: int) -> SingleModeData:
    """g0(z) = z^p / 2 at alpha = 1/2, so A0(w) = 2 pi^2 cos(pi w^p / 2)."""
    return SingleModeData(p=p, flow=CharFlow(single_mode(p)))
