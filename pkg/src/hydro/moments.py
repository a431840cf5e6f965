"""Limiting moments m_n(t) of the hydrodynamic density.

    m_n(t) = sum_{pi |- n} (2 pi alpha)^{l(pi)-1} / prod_i l_i! * d^{l(pi)-1} h_t^n(0) * m_pi

with h_t(x) = exp(-2 pi^2 t sin(alpha pi + x) / sin(alpha pi)) and l_i the
part multiplicities. Grouping partitions by length turns the inner sum into
[z^n] g0(z)^l / l!, so everything reduces to truncated power series.
"""
import logging
from math import factorial, pi, prod, sin
from typing import Sequence

import numpy as np

from ..combinatorics.bell import bell_partial
from ..combinatorics.partitions import enumerate_partitions
from ..core.config import settings
from ..core.errors import InvalidArgumentError
from .profiles import InitialProfile, check_alpha

logger = logging.getLogger(__name__)


# --- truncated power series ---

def series_exp(a: np.ndarray) -> np.ndarray:
    """Taylor coefficients of exp(a(x)) to the order of ``a``."""
    n = a.shape[0]
    b = np.zeros(n, dtype=a.dtype)
    b[0] = np.exp(a[0])
    k = np.arange(n)
    for m in range(1, n):
        b[m] = np.dot(k[1:m + 1] * a[1:m + 1], b[m - 1::-1][:m]) / m
    return b


def series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: a.shape[0]]


def shifted_sine_series(theta: float, order: int) -> np.ndarray:
    """Taylor coefficients of sin(theta + x): sin(theta + k pi / 2) / k!."""
    return np.array([sin(theta + k * pi / 2) / factorial(k) for k in range(order + 1)])


def h_power_jet(n: int, t: float, alpha: float, order: int) -> np.ndarray:
    """Taylor coefficients b_j of h_t(x)^n at 0, j = 0..order."""
    alpha = check_alpha(alpha)
    s = shifted_sine_series(pi * alpha, order)
    return series_exp(-2 * pi ** 2 * n * t * s / sin(pi * alpha))


def h_power_derivatives(n: int, t: float, alpha: float, order: int) -> np.ndarray:
    """d^j h_t^n(0), j = 0..order."""
    b = h_power_jet(n, t, alpha, order)
    return b * np.array([factorial(j) for j in range(order + 1)], dtype=np.float64)


def h_power_derivatives_bell(n: int, t: float, alpha: float, order: int) -> np.ndarray:
    """Same derivatives via Faa di Bruno with partial Bell polynomials."""
    c = -2 * pi ** 2 * n * t / sin(pi * alpha)
    inner = [c * sin(pi * alpha + k * pi / 2) for k in range(1, order + 1)]
    base = np.exp(c * sin(pi * alpha))
    out = [base]
    for j in range(1, order + 1):
        out.append(base * sum(bell_partial(j, k, inner) for k in range(1, j + 1)).real)
    return np.array(out, dtype=np.float64)


# --- moments ---

def _moment_list(profile, n_max: int) -> np.ndarray:
    if isinstance(profile, InitialProfile):
        return profile.moments(n_max)
    m = np.zeros(n_max + 1, dtype=np.complex128)
    vals = np.asarray(profile, dtype=np.complex128)
    m[0] = 1.0
    k = min(n_max, vals.shape[0])
    m[1:k + 1] = vals[:k]
    return m


def _check_order(n: int) -> None:
    if n < 0:
        raise InvalidArgumentError("moment order must be nonnegative", n=n)
    if n > settings.DEFAULT_N_MAX:
        raise InvalidArgumentError("moment order above the configured n_max", n=n, n_max=settings.DEFAULT_N_MAX)


def limit_moments(t: float, profile, alpha: float, n_max: int) -> np.ndarray:
    """m_0(t) .. m_{n_max}(t).

    ``profile`` is an InitialProfile or a sequence m_1, m_2, ... of initial
    moments (used for the semiflow restart).
    """
    _check_order(n_max)
    if t < 0:
        raise InvalidArgumentError("time must be nonnegative", t=t)
    alpha = check_alpha(alpha)
    m = _moment_list(profile, n_max)
    g = m.copy()
    g[0] = 0.0
    out = np.zeros(n_max + 1, dtype=np.complex128)
    out[0] = 1.0
    # powers[l] = [z^.] g0^l / l!
    powers = [np.zeros(n_max + 1, dtype=np.complex128) for _ in range(n_max + 1)]
    if n_max >= 1:
        powers[1] = g
    for l in range(2, n_max + 1):
        powers[l] = series_mul(powers[l - 1], g) / l
    for n in range(1, n_max + 1):
        b = h_power_jet(n, t, alpha, n - 1)
        out[n] = sum((2 * pi * alpha) ** (l - 1) * factorial(l - 1) * b[l - 1] * powers[l][n]
                     for l in range(1, n + 1))
    return out


def limit_moment(n: int, t: float, profile, alpha: float) -> complex:
    if n < 0:
        return complex(np.conj(limit_moment(-n, t, profile, alpha)))
    if n == 0:
        return 1.0 + 0.0j
    return complex(limit_moments(t, profile, alpha, n)[n])


def limit_moment_by_partitions(n: int, t: float, profile, alpha: float) -> complex:
    """Direct sum over partitions of n; exponential in n, a cross-check only."""
    _check_order(n)
    if n == 0:
        return 1.0 + 0.0j
    m = _moment_list(profile, n)
    d = h_power_derivatives(n, t, alpha, n - 1)
    total = 0.0j
    for lam in enumerate_partitions(n):
        ell = lam.length
        weight = (2 * pi * alpha) ** (ell - 1) / prod(factorial(c) for c in lam.multiplicities().values())
        total += weight * d[ell - 1] * prod(m[part] for part in lam)
    return complex(total)


def propagate_moments(values: Sequence[complex], s: float, alpha: float) -> np.ndarray:
    """Moments at time s from moments m_1..m_n given at time 0."""
    vals = np.asarray(values, dtype=np.complex128)
    return limit_moments(s, vals, alpha, vals.shape[0])[1:]


def semiflow_defect(profile: InitialProfile, s: float, t: float, n_max: int) -> float:
    """max_n |m_n(s + t) - m_n evolved for t from the time-s moments|."""
    direct = limit_moments(s + t, profile, profile.alpha, n_max)[1:]
    restart = propagate_moments(limit_moments(s, profile, profile.alpha, n_max)[1:], t, profile.alpha)
    return float(np.max(np.abs(direct - restart)))