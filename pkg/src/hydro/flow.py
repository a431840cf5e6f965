"""Characteristic flow Phi_t(w) = w exp(t A0(w)) and its inverse w(t, z).

g(t, z) = g0(w(t, z)) solves the transport equation for the moment
generating function. The inverse is found by vectorized Newton iteration;
points where Newton stalls are retried by continuation in t and, failing
that, certified with an argument-principle count before giving up.
"""
import logging
from dataclasses import dataclass
from math import pi
from typing import Optional, Tuple

import numpy as np

from ..core.accel import njit
from ..core.config import settings
from ..core.errors import InvalidArgumentError, NumericalFailureError
from ..core.logging import stage
from .profiles import InitialProfile

logger = logging.getLogger(__name__)

NEWTON_TOL = 1e-13
CONTINUATION_STEPS = (16, 64, 256)
RADIAL_LEVELS = 24
FRONT_JUMP = 1e-4


@njit(cache=True)
def winding_of_path(x, y):
    """Signed crossings of the ray (0, 0) -> (inf, 0) by a closed polygon."""
    count = 0
    above = y[0] >= 0
    for i in range(1, x.shape[0]):
        if (y[i] >= 0) != above:
            above = y[i] >= 0
            if x[i] > 0 and x[i - 1] > 0:
                count += 2 * above - 1
            elif not (x[i] <= 0 and x[i - 1] <= 0):
                cross = (x[i - 1] * y[i] - x[i] * y[i - 1]) / (y[i] - y[i - 1])
                if cross > 0:
                    count += 2 * above - 1
    return count


@dataclass
class CharFlow:
    profile: InitialProfile

    @property
    def alpha(self) -> float:
        return self.profile.alpha

    def g0(self, w):
        return self.profile.g0(w)

    def A0(self, w):
        return self.profile.A0(w)

    def phi(self, t: float, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.complex128)
        return w * np.exp(t * self.A0(w))

    def phi_prime(self, t: float, w) -> np.ndarray:
        """(1 + t w A0'(w)) exp(t A0(w))."""
        w = np.asarray(w, dtype=np.complex128)
        return (1 + t * w * self.profile.A0_prime(w)) * np.exp(t * self.A0(w))

    def winding_count(self, t: float, z: complex, radius: float, nodes: Optional[int] = None) -> int:
        """Zeros of Phi_t(.) - z inside |w| < radius (no zero on the circle assumed)."""
        K = nodes or settings.WINDING_NODES
        theta = 2 * pi * np.arange(K + 1) / K
        vals = self.phi(t, radius * np.exp(1j * theta)) - z
        vals[-1] = vals[0]
        return int(winding_of_path(np.ascontiguousarray(vals.real), np.ascontiguousarray(vals.imag)))


# --- Newton ---

def _newton(flow: CharFlow, t: float, z: np.ndarray, w0: np.ndarray, max_iter: Optional[int] = None,
            closed: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized Newton for Phi_t(w) = z; returns (w, residual)."""
    max_iter = max_iter or settings.NEWTON_MAX_ITER
    w = np.array(w0, dtype=np.complex128)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            F = flow.phi(t, w) - z
            res = np.abs(F)
            active = res > NEWTON_TOL * np.maximum(1.0, np.abs(z))
            if not np.any(active):
                break
            step = F[active] / flow.phi_prime(t, w[active])
            nxt = w[active] - step
            bad = ~np.isfinite(nxt)
            nxt[bad] = w[active][bad] * 0.5
            out = np.abs(nxt) > 1.0
            if closed:
                nxt[out] = nxt[out] / np.abs(nxt[out])
            else:
                nxt[out] = 0.5 * (w[active][out] + nxt[out] / np.abs(nxt[out]))
            w[active] = nxt
        res = np.abs(flow.phi(t, w) - z)
    res[~np.isfinite(res)] = np.inf
    return w, res


def _converged(res: np.ndarray, z: np.ndarray, slack: float = 1e3) -> np.ndarray:
    return res <= slack * NEWTON_TOL * np.maximum(1.0, np.abs(z))


def _time_continuation(flow: CharFlow, t: float, z: np.ndarray, w: np.ndarray, res: np.ndarray,
                       closed: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    for steps in CONTINUATION_STEPS:
        todo = ~_converged(res, z)
        if not np.any(todo):
            break
        logger.debug("time continuation over %d steps for %d points", steps, int(todo.sum()))
        zz = z[todo]
        ww = zz.copy()
        for k in range(1, steps + 1):
            ww, rr = _newton(flow, t * k / steps, zz, ww, closed=closed)
        w[todo], res[todo] = ww, rr
    return w, res


def invert_many(flow: CharFlow, t: float, z, closed: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """w(t, z) for an array of interior points; returns (w, residual)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if t == 0:
        return z.copy(), np.zeros(z.shape)
    with np.errstate(all="ignore"):
        seed = z * np.exp(-t * flow.A0(z))
    seed[~np.isfinite(seed)] = z[~np.isfinite(seed)] * 0.5
    w, res = _newton(flow, t, z, seed, closed=closed)
    if not np.all(_converged(res, z)):
        w, res = _time_continuation(flow, t, z, w, res, closed=closed)
    return w, res


def flow_invert(t: float, z: complex, flow: CharFlow) -> complex:
    """The unique w in the disk with Phi_t(w) = z."""
    if t < 0:
        raise InvalidArgumentError("time must be nonnegative", t=t)
    if abs(z) > 1 + 1e-14:
        raise InvalidArgumentError("z must lie in the closed unit disk", z=z)
    if t == 0 or z == 0:
        return complex(z)
    if abs(z) >= 1 - 1e-14:
        return complex(boundary_values(flow, t, np.array([z]))[0][0])
    w, res = invert_many(flow, t, np.array([z]))
    if _converged(res, np.array([z]))[0] and abs(w[0]) < abs(z):
        return complex(w[0])
    return _certified_root(flow, t, complex(z), complex(w[0]), float(res[0]))


def _certified_root(flow: CharFlow, t: float, z: complex, w_best: complex, res_best: float) -> complex:
    r = abs(z)
    count = flow.winding_count(t, z, r)
    diagnostics = {"t": t, "z": z, "winding": count, "residual": res_best}
    if count != 1:
        raise NumericalFailureError("argument principle does not certify a unique root", diagnostics=diagnostics)
    logger.warning("Newton stalled at t=%g z=%s; reseeding inside |w| < %.3g", t, z, r)
    radii = r * np.linspace(0.05, 0.95, 10)
    angles = 2 * pi * np.arange(16) / 16
    seeds = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
    w, res = _newton(flow, t, np.full(seeds.shape, z), seeds)
    inside = np.abs(w) < r
    if np.any(inside):
        k = int(np.argmin(np.where(inside, res, np.inf)))
        if _converged(res[k:k + 1], np.array([z]), slack=1e4)[0]:
            return complex(w[k])
        diagnostics["residual"] = float(res[k])
    raise NumericalFailureError("flow inversion did not converge", diagnostics=diagnostics)


# --- boundary values ---

@dataclass
class BoundaryValues:
    w: np.ndarray
    residual: np.ndarray
    front: np.ndarray
    extrapolated: np.ndarray


def boundary_values(flow: CharFlow, t: float, z: np.ndarray) -> Tuple[np.ndarray, BoundaryValues]:
    """w(t, z) for |z| = 1 by radial continuation r_j = 1 - 2^{-j}.

    Points where the final Newton solve at r = 1 fails are Richardson
    extrapolated from the last two radii; a large last increment marks the
    point as a front.
    """
    z = np.asarray(z, dtype=np.complex128)
    if t == 0:
        bv = BoundaryValues(z.copy(), np.zeros(z.shape), np.zeros(z.shape, bool), np.zeros(z.shape, bool))
        return z.copy(), bv
    w, res = invert_many(flow, t, 0.5 * z)
    prev = w.copy()
    for j in range(2, RADIAL_LEVELS + 1):
        prev = w.copy()
        w, res = _newton(flow, t, (1 - 2.0 ** -j) * z, w)
    last = w.copy()
    w1, res1 = _newton(flow, t, z, last, closed=True)
    ok = _converged(res1, z, slack=1e5) & (np.abs(w1) <= 1 + 1e-10)
    extrap = 2 * last - prev
    mag = np.abs(extrap)
    extrap = np.where(mag > 1, extrap / np.where(mag > 0, mag, 1), extrap)
    out = np.where(ok, w1, extrap)
    mag = np.abs(out)
    out = np.where(mag > 1, out / mag, out)
    front = np.abs(last - prev) > FRONT_JUMP
    if np.any(~ok):
        logger.warning("radial continuation extrapolated %d of %d boundary points", int((~ok).sum()), z.size)
    return out, BoundaryValues(w=out, residual=np.where(ok, res1, np.nan), front=front, extrapolated=~ok)


# --- series ---

def moment_generating(t: float, z, flow: CharFlow) -> np.ndarray:
    """g(t, z) = g0(w(t, z)) at interior points."""
    w, res = invert_many(flow, t, z)
    if not np.all(_converged(res, np.atleast_1d(np.asarray(z, dtype=np.complex128)))):
        raise NumericalFailureError("flow inversion did not converge", diagnostics={"max_residual": float(np.max(res))})
    return flow.g0(w)


def taylor_moments(t: float, flow: CharFlow, n_max: int, radius: float = 0.5,
                   nodes: Optional[int] = None) -> np.ndarray:
    """Taylor coefficients m_0..m_{n_max} of g(t, .) from samples on |z| = radius."""
    K = nodes or max(64, 8 * n_max)
    z = radius * np.exp(2j * pi * np.arange(K) / K)
    g = moment_generating(t, z, flow)
    c = np.fft.fft(g) / K
    out = c[: n_max + 1] / radius ** np.arange(n_max + 1)
    out[0] = 1.0
    return out


def _inside_level(flow: CharFlow, t: float, r: float, K: int) -> float:
    w = r * np.exp(2j * pi * np.arange(K) / K)
    return float(np.max(np.abs(flow.phi(t, w))))


def quadrature_radius(flow: CharFlow, t: float, level: float = 0.95, K: int = 256) -> float:
    """Largest r (by bisection) with max |Phi_t| <= level on |w| = r."""
    lo, hi = 0.0, 1.0 - 1e-9
    if _inside_level(flow, t, hi, K) <= level:
        return hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _inside_level(flow, t, mid, K) <= level:
            lo = mid
        else:
            hi = mid
    return lo


def coefficient_a_n(t: float, flow: CharFlow, n_max: int, radius: Optional[float] = None,
                    nodes: Optional[int] = None) -> np.ndarray:
    """a_1..a_{n_max} of w(t, z) = sum a_n z^n by Lagrange-Buermann quadrature.

    a_n = (1 / (2 i pi n)) contour integral of exp(-n t A0(w)) / w^n over
    |w| = r, with r inside V_t.
    """
    if t <= 0:
        raise InvalidArgumentError("coefficients need t > 0", t=t)
    r = quadrature_radius(flow, t) if radius is None else radius
    K = nodes or max(64, 8 * n_max)
    if not 0 < r < 1:
        raise InvalidArgumentError("quadrature radius must lie in (0, 1)", radius=r)
    if _inside_level(flow, t, r, K) >= 1:
        raise InvalidArgumentError("quadrature circle leaves the domain V_t", radius=r, t=t)
    w = r * np.exp(2j * pi * np.arange(K) / K)
    A = flow.A0(w)
    out = np.empty(n_max, dtype=np.complex128)
    for n in range(1, n_max + 1):
        out[n - 1] = np.mean(np.exp(-n * t * A) * w ** (1 - n)) / n
    return out


def boundary_coefficients(t: float, flow: CharFlow, n_max: int, nodes: Optional[int] = None) -> np.ndarray:
    """a_1..a_{n_max} as Fourier coefficients of the boundary values w(t, e^{i theta})."""
    K = nodes or max(1024, 32 * n_max)
    z = np.exp(2j * pi * np.arange(K) / K)
    with stage(logger, "boundary-coefficients", t=t, nodes=K):
        w, _ = boundary_values(flow, t, z)
        c = np.fft.fft(w) / K
    return c[1: n_max + 1]


def fit_decay_exponent(n: np.ndarray, a: np.ndarray) -> float:
    """Slope of log |a_n| against log n."""
    n, a = np.asarray(n, dtype=np.float64), np.abs(np.asarray(a))
    keep = a > 0
    return float(np.polyfit(np.log(n[keep]), np.log(a[keep]), 1)[0])
