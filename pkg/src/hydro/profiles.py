"""Initial density profiles and their moment generating functions.

Moments are m_n = int e^{inx} f0(x) dx with f0 a probability density on
[0, 2 pi), so m_0 = 1 and g0(z) = sum_{n >= 1} m_n z^n.
"""
import logging
from dataclasses import dataclass, field
from math import pi, sin
from typing import Optional, Sequence

import numpy as np

from ..core.config import settings
from ..core.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-9


def check_alpha(alpha: float) -> float:
    if not 0 < alpha < 1:
        raise InvalidArgumentError("density alpha must lie in (0, 1)", alpha=alpha)
    return float(alpha)


class InitialProfile:
    """Base class: subclasses provide moments and g0 on the closed disk."""

    alpha: float
    name: str = "profile"

    def moment(self, n: int) -> complex:
        raise NotImplementedError

    def moments(self, n_max: int) -> np.ndarray:
        """m_0 .. m_{n_max}."""
        return np.array([self.moment(n) for n in range(n_max + 1)], dtype=np.complex128)

    def g0(self, z) -> np.ndarray:
        raise NotImplementedError

    def g0_prime(self, z) -> np.ndarray:
        raise NotImplementedError

    def density(self, x) -> np.ndarray:
        raise NotImplementedError

    @property
    def upper(self) -> float:
        return 1.0 / (2 * pi * self.alpha)

    def A0(self, w) -> np.ndarray:
        """2 pi^2 sin(pi alpha (1 + 2 g0(w))) / sin(pi alpha)."""
        a = self.alpha
        return 2 * pi ** 2 * np.sin(pi * a * (1 + 2 * self.g0(w))) / sin(pi * a)

    def A0_prime(self, w) -> np.ndarray:
        a = self.alpha
        return 4 * pi ** 3 * a * np.cos(pi * a * (1 + 2 * self.g0(w))) * self.g0_prime(w) / sin(pi * a)

    def describe(self) -> dict:
        return {"profile": self.name, "alpha": self.alpha}


@dataclass
class MomentProfile(InitialProfile):
    """Finitely many nonzero moments; g0 is a polynomial."""

    values: Sequence[complex]
    alpha: float
    name: str = "moments"
    coeffs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.alpha = check_alpha(self.alpha)
        c = np.zeros(len(self.values) + 1, dtype=np.complex128)
        c[1:] = np.asarray(self.values, dtype=np.complex128)
        if np.any(np.abs(c) > 1 + BOUND_TOL):
            raise InvalidArgumentError("moments of a probability density satisfy |m_n| <= 1")
        self.coeffs = c

    def moment(self, n: int) -> complex:
        if n < 0:
            return complex(np.conj(self.moment(-n)))
        if n == 0:
            return 1.0 + 0.0j
        return complex(self.coeffs[n]) if n < len(self.coeffs) else 0.0j

    def g0(self, z) -> np.ndarray:
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), self.coeffs)

    def g0_prime(self, z) -> np.ndarray:
        d = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), d)

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        z = np.exp(-1j * x)
        return (1 + 2 * np.real(self.g0(z))) / (2 * pi)

    def check_bounds(self, grid: Optional[int] = None) -> None:
        M = grid or settings.DEFAULT_GRID
        f = self.density(2 * pi * np.arange(M) / M)
        if f.min() < -BOUND_TOL or f.max() > self.upper + BOUND_TOL:
            raise InvalidArgumentError(
                "initial density leaves [0, 1/(2 pi alpha)]", min=float(f.min()), max=float(f.max()), alpha=self.alpha
            )


def cosine_profile(a: float, k: int, alpha: float) -> MomentProfile:
    """f0 = (1 + a cos kx) / (2 pi), i.e. m_k = a / 2."""
    if k < 1:
        raise InvalidArgumentError("cosine mode must be >= 1", k=k)
    values = [0.0] * k
    values[k - 1] = a / 2
    prof = MomentProfile(values=values, alpha=alpha, name=f"cosine(a={a},k={k})")
    prof.check_bounds()
    return prof


def single_mode(p: int) -> MomentProfile:
    """f0 = (1 + cos px) / (2 pi) at alpha = 1/2, saturating both bounds."""
    if p < 1:
        raise InvalidArgumentError("single-mode order must be >= 1", p=p)
    return cosine_profile(1.0, p, 0.5)


def grid_profile(samples: Sequence[float], alpha: float) -> MomentProfile:
    """Profile from samples f0(2 pi j / M), moments by FFT up to M/2 - 1."""
    f = np.asarray(samples, dtype=np.float64)
    M = f.shape[0]
    mass = f.sum() * 2 * pi / M
    if abs(mass - 1) > 1e-6:
        raise InvalidArgumentError("grid density must integrate to 1", mass=float(mass))
    m = np.fft.ifft(f) * 2 * pi
    prof = MomentProfile(values=m[1:M // 2], alpha=alpha, name=f"grid(M={M})")
    if f.min() < -BOUND_TOL or f.max() > prof.upper + BOUND_TOL:
        raise InvalidArgumentError("grid density leaves [0, 1/(2 pi alpha)]", alpha=alpha)
    return prof


@dataclass
class StepProfile(InitialProfile):
    """f0 = 1/(2 pi alpha) on [-pi alpha, pi alpha], zero elsewhere.

    g0(z) = log((1 - z conj(w_a)) / (1 - z w_a)) / (2 i pi alpha) on the
    principal branch, w_a = exp(i pi alpha).
    """

    alpha: float
    name: str = "step"

    def __post_init__(self):
        self.alpha = check_alpha(self.alpha)

    @property
    def w_alpha(self) -> complex:
        return np.exp(1j * pi * self.alpha)

    def moment(self, n: int) -> complex:
        if n == 0:
            return 1.0 + 0.0j
        return complex(sin(n * pi * self.alpha) / (n * pi * self.alpha))

    def g0(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        wa = self.w_alpha
        return np.log((1 - z * np.conj(wa)) / (1 - z * wa)) / (2j * pi * self.alpha)

    def g0_prime(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        wa = self.w_alpha
        return (wa / (1 - z * wa) - np.conj(wa) / (1 - z * np.conj(wa))) / (2j * pi * self.alpha)

    def A0(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.complex128)
        wa = self.w_alpha
        return 2 * pi ** 2 * (1 - w) * (1 + w) / ((w - wa) * (w - np.conj(wa)))

    def A0_prime(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.complex128)
        c = np.cos(pi * self.alpha)
        D = w * w - 2 * c * w + 1
        return 4 * pi ** 2 * (c * w * w - 2 * w + c) / (D * D)

    def density(self, x) -> np.ndarray:
        x = np.mod(np.asarray(x, dtype=np.float64) + pi, 2 * pi) - pi
        return np.where(np.abs(x) <= pi * self.alpha, self.upper, 0.0)

    def check_branch(self, samples: int = 4096, seed: int = 0) -> None:
        """The Moebius ratio must avoid (-inf, 0] on the open disk."""
        rng = np.random.default_rng(seed)
        z = np.sqrt(rng.random(samples)) * np.exp(2j * pi * rng.random(samples)) * (1 - 1e-9)
        wa = self.w_alpha
        ratio = (1 - z * np.conj(wa)) / (1 - z * wa)
        bad = (np.abs(ratio.imag) < 1e-14) & (ratio.real <= 0)
        if np.any(bad):
            raise InvalidArgumentError("log branch cut reached inside the disk", alpha=self.alpha)


def velocity(z, alpha: float) -> np.ndarray:
    """V_alpha(z) = 2 pi^2 sin(pi alpha (1 + 2 z)) / sin(pi alpha)."""
    alpha = check_alpha(alpha)
    return 2 * pi ** 2 * np.sin(pi * alpha * (1 + 2 * np.asarray(z, dtype=np.complex128))) / sin(pi * alpha)


def flux(f, hf, alpha: float) -> np.ndarray:
    """J_alpha = sin(2 pi^2 alpha f) sinh(2 pi^2 alpha Hf)."""
    alpha = check_alpha(alpha)
    f, hf = np.asarray(f, dtype=np.float64), np.asarray(hf, dtype=np.float64)
    return np.sin(2 * pi ** 2 * alpha * f) * np.sinh(2 * pi ** 2 * alpha * hf)


def make_profile(spec: dict) -> InitialProfile:
    """Profile from a JSON spec: {"kind": "step"|"cosine"|"single_mode"|"moments"|"grid", ...}."""
    kind = spec.get("kind")
    if kind == "step":
        return StepProfile(alpha=spec["alpha"])
    if kind == "cosine":
        return cosine_profile(spec.get("a", 0.3), spec.get("k", 1), spec["alpha"])
    if kind == "single_mode":
        return single_mode(spec["p"])
    if kind == "moments":
        values = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in spec["values"]]
        prof = MomentProfile(values=values, alpha=spec["alpha"])
        prof.check_bounds()
        return prof
    if kind == "grid":
        return grid_profile(spec["samples"], spec["alpha"])
    raise InvalidArgumentError("unknown profile kind", kind=kind)
