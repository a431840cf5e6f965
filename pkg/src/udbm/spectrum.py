"""Exact eigen-series of the unitary Dyson Brownian motion.

Spectral indices m are strictly increasing integer N-tuples. With
gamma = 0 (N odd) or 1/2 (N even) and the ground index
c = (-p, ..., -p + N - 1), p = N // 2, the eigenfunction attached to m is
f_m = Psi_m / Psi_c with Psi_m(x) = det[exp(i (m_j + gamma) x_k)], and

    E_m = (2 pi^2 / N) sum_i ((m_i + gamma)^2 - (c_i + gamma)^2).

f_m equals prod(z)^ell s_lam(z) at z = exp(i x), where ell = m_1 + p and
lam_{N+1-i} = m_i - c_i - ell.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, floor, pi
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..combinatorics.partitions import Partition, as_partition
from ..core.errors import InvalidArgumentError
from ..core.logging import stage
from ..messep.lattice import LatticeParams, make_configuration, partition_from_config
from ..messep.spectral import eigenvalue_of
from ..symmetric.evaluation import schur_at_ones, schur_eval

logger = logging.getLogger(__name__)

SpectralIndex = Tuple[int, ...]
Symmetric = Callable[[np.ndarray], np.ndarray]

TAIL_TARGET = 1e-8
TAIL_WINDOW = 40.0
MAX_ENERGY_CAP = 5.0e4
MAX_GRID_POINTS = 1 << 22


def _gamma(N: int) -> float:
    return 0.0 if N % 2 else 0.5


def ground_index(N: int) -> SpectralIndex:
    if N < 1:
        raise InvalidArgumentError("need at least one particle", N=N)
    p = N // 2
    return tuple(range(-p, -p + N))


def check_index(m: Sequence[int]) -> SpectralIndex:
    m = tuple(int(v) for v in m)
    if not m or any(b <= a for a, b in zip(m, m[1:])):
        raise InvalidArgumentError("spectral index must be strictly increasing", m=m)
    return m


def energy(m: Sequence[int], N: Optional[int] = None) -> float:
    m = check_index(m)
    N = len(m) if N is None else N
    if len(m) != N:
        raise InvalidArgumentError("index length differs from N", m=m, N=N)
    g = _gamma(N)
    c = ground_index(N)
    return 2 * pi ** 2 / N * sum((mi + g) ** 2 - (ci + g) ** 2 for mi, ci in zip(m, c))


def partition_from_index(m: Sequence[int]) -> Tuple[Partition, int]:
    """(lam, ell) with f_m = prod(z)^ell s_lam(z)."""
    m = check_index(m)
    N = len(m)
    c = ground_index(N)
    ell = m[0] - c[0]
    parts = [m[N - 1 - i] - c[N - 1 - i] - ell for i in range(N)]
    return Partition(tuple(parts)), ell


def index_from_partition(lam, ell: int, N: int) -> SpectralIndex:
    lam = as_partition(lam)
    if lam.length > N:
        raise InvalidArgumentError("partition has more than N parts", lam=str(lam), N=N)
    c = ground_index(N)
    return tuple(lam[N - 1 - i] + c[i] + ell for i in range(N))


def spectral_indices(N: int, E_max: float) -> List[SpectralIndex]:
    """All m with E_m <= E_max, sorted by energy then lexicographically."""
    if E_max < 0:
        return []
    g = _gamma(N)
    c = ground_index(N)
    budget = N * E_max / (2 * pi ** 2) + sum((ci + g) ** 2 for ci in c) + 1e-9
    radius = int(floor(budget ** 0.5 + abs(g))) + 1
    out: List[SpectralIndex] = []

    def extend(prefix: List[int], used: float):
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        lo = prefix[-1] + 1 if prefix else -radius
        for v in range(lo, radius + 1):
            cost = used + (v + g) ** 2
            if cost <= budget:
                prefix.append(v)
                extend(prefix, cost)
                prefix.pop()

    extend([], 0.0)
    out.sort(key=lambda m: (round(energy(m, N), 9), m))
    return out


def eigenfunction(m: Sequence[int], x) -> complex:
    """f_m at one angle tuple x."""
    m = check_index(m)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(m),):
        raise InvalidArgumentError("angle tuple must have N entries", N=len(m), shape=x.shape)
    lam, ell = partition_from_index(m)
    z = np.exp(1j * x)
    return complex(np.prod(z) ** ell * schur_eval(lam, z))


def sup_bound(m: Sequence[int]) -> float:
    """sup |f_m| = s_lam(1, ..., 1)."""
    lam, _ = partition_from_index(m)
    return float(schur_at_ones(lam, len(m)))


@lru_cache(maxsize=64)
def _tail_terms(N: int, E_lo: float, E_hi: float) -> Tuple[Tuple[float, float], ...]:
    return tuple(
        (energy(m, N), sup_bound(m)) for m in spectral_indices(N, E_hi) if energy(m, N) > E_lo
    )


def tail_bound(N: int, t: float, E_max: float, scale: float = 1.0) -> float:
    """scale * sum over E_m > E_max of exp(-E_m t) sup|f_m|.

    The sum runs over the window E_max < E_m <= E_max + 40 / t; terms
    beyond it are smaller than exp(-40) times a polynomial in E.
    """
    if t <= 0:
        return float("inf")
    E_hi = E_max + TAIL_WINDOW / t
    terms = _tail_terms(N, round(E_max, 9), round(E_hi, 9))
    return scale * sum(np.exp(-E * t) * C for E, C in terms)


def default_energy_cap(N: int, t: float, scale: float = 1.0, target: float = TAIL_TARGET) -> float:
    """Smallest doubling of 2 pi^2 whose tail bound is below ``target``."""
    if t <= 0:
        raise InvalidArgumentError("the eigen-series needs t > 0", t=t)
    E = 2 * pi ** 2
    while tail_bound(N, t, E, scale) >= target:
        E *= 2
        if E > MAX_ENERGY_CAP:
            raise InvalidArgumentError("t too small for a truncated eigen-series", t=t, N=N)
    return E


# --- projection of general observables ---

def _ground_alternant(x: np.ndarray) -> np.ndarray:
    """Psi_c(x) exp(-i gamma sum x) = prod(z)^{-p} prod_{i<j} (z_j - z_i)."""
    N = x.shape[-1]
    z = np.exp(1j * x)
    out = np.prod(z, axis=-1) ** (-(N // 2))
    for i in range(N):
        for j in range(i + 1, N):
            out = out * (z[..., j] - z[..., i])
    return out


@dataclass
class SpectralExpansion:
    """Truncated expansion f = sum_m c_m f_m over E_m <= E_max."""

    N: int
    E_max: float
    indices: List[SpectralIndex]
    coefficients: np.ndarray
    energies: np.ndarray
    sup_norm: float

    def evaluate(self, x, t: float = 0.0) -> complex:
        x = np.asarray(x, dtype=np.float64)
        vals = np.array([eigenfunction(m, x) for m in self.indices])
        return complex(np.sum(self.coefficients * np.exp(-self.energies * t) * vals))

    def propagate(self, s: float) -> "SpectralExpansion":
        return SpectralExpansion(
            N=self.N,
            E_max=self.E_max,
            indices=self.indices,
            coefficients=self.coefficients * np.exp(-self.energies * s),
            energies=self.energies,
            sup_norm=self.sup_norm,
        )

    def mean(self) -> complex:
        """mu-average, the coefficient of the ground index."""
        c = ground_index(self.N)
        return complex(self.coefficients[self.indices.index(c)]) if c in self.indices else 0.0j

    def tail(self, t: float) -> float:
        return tail_bound(self.N, t, self.E_max, self.sup_norm)


def project(f: Symmetric, N: int, E_max: float, grid: Optional[int] = None) -> SpectralExpansion:
    """Coefficients c_m = <f, f_m>_mu from a tensor FFT of f Psi_c.

    ``f`` receives an (M, N) array of angle tuples and returns M values.
    """
    indices = spectral_indices(N, E_max)
    reach = max(max(abs(v) for v in m) for m in indices)
    K = grid or max(16, 1 << int(np.ceil(np.log2(2 * reach + 2))))
    if K ** N > MAX_GRID_POINTS:
        raise InvalidArgumentError("projection grid too large", K=K, N=N)
    with stage(logger, "udbm-project", N=N, E_max=E_max, grid=K, indices=len(indices)):
        axes = np.meshgrid(*([2 * np.pi * np.arange(K) / K] * N), indexing="ij")
        x = np.stack([a.ravel() for a in axes], axis=1)
        fx = np.asarray(f(x), dtype=np.complex128)
        g = (fx * _ground_alternant(x)).reshape((K,) * N)
        F = np.fft.fftn(g) / K ** N
        coeff = np.array([F[tuple(v % K for v in m)] for m in indices])
    return SpectralExpansion(
        N=N,
        E_max=E_max,
        indices=indices,
        coefficients=coeff,
        energies=np.array([energy(m, N) for m in indices]),
        sup_norm=float(np.max(np.abs(fx))),
    )


@dataclass
class SchurObservable:
    """prod(z)^ell s_lam(z), the eigenfunction of one spectral index."""

    lam: Partition
    ell: int = 0

    def index(self, N: int) -> SpectralIndex:
        return index_from_partition(self.lam, self.ell, N)

    def __str__(self) -> str:
        return f"s{self.lam}*e^{self.ell}" if self.ell else f"s{self.lam}"


Observable = Union[SchurObservable, Symmetric]


@dataclass
class MomentResult:
    value: complex
    tail: float
    E_max: float
    terms: int


def semigroup_moment(f: Observable, t: float, start, E_max: Optional[float] = None) -> MomentResult:
    """E_x[f(X_t)] for the Dyson motion started at angles ``start``.

    Schur observables are eigenfunctions and need no truncation; general
    callables are projected onto all indices with E_m <= E_max.
    """
    x = np.asarray(getattr(start, "angles", start), dtype=np.float64)
    N = x.shape[0]
    if t < 0:
        raise InvalidArgumentError("time must be nonnegative", t=t)
    if isinstance(f, SchurObservable):
        m = f.index(N)
        val = np.exp(-energy(m, N) * t) * eigenfunction(m, x)
        return MomentResult(value=complex(val), tail=0.0, E_max=energy(m, N), terms=1)
    if t == 0:
        return MomentResult(value=complex(np.asarray(f(x[None, :]))[0]), tail=0.0, E_max=0.0, terms=0)
    cap = default_energy_cap(N, t) if E_max is None else E_max
    exp = project(f, N, cap)
    return MomentResult(value=exp.evaluate(x, t), tail=exp.tail(t), E_max=cap, terms=len(exp.indices))


def cue_sample(N: int, rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """(size, N) sorted angles from the CUE density |Psi_c|^2 / (N! (2 pi)^N).

    Rejection from uniform angles against |Vandermonde|^2 <= N^N.
    """
    if N < 1:
        raise InvalidArgumentError("need at least one particle", N=N)
    out = np.empty((size, N))
    filled = 0
    bound = float(N) ** N
    while filled < size:
        batch = max(64, int(2 * (size - filled) * bound / factorial(N)))
        x = rng.random((batch, N)) * 2 * np.pi
        dens = np.abs(_ground_alternant(x)) ** 2
        keep = x[rng.random(batch) * bound < dens]
        take = min(len(keep), size - filled)
        out[filled:filled + take] = np.sort(keep[:take], axis=1)
        filled += take
    return out


# --- comparison with the rescaled exclusion chain ---

def discrete_eigenvalue(m: Sequence[int], params: LatticeParams) -> float:
    """Eigenvalue of the lattice function prod(z)^ell s_lam(z), z = exp(2 i pi xi / L)."""
    sites = [v % params.L for v in m]
    if len(set(sites)) != len(sites):
        raise InvalidArgumentError("index wraps onto itself on this ring", m=tuple(m), L=params.L)
    lam = partition_from_config(make_configuration(sites, params), params)
    return eigenvalue_of(lam, params)


@dataclass
class ComparisonRow:
    L: int
    observable: str
    discrete: complex
    continuous: complex
    abs_err: float


def spread_sites(L: int, N: int, fractions: Optional[Sequence[float]] = None) -> Tuple[int, ...]:
    fractions = [i / N for i in range(N)] if fractions is None else fractions
    return tuple(sorted(int(floor(L * u)) % L for u in fractions))


def low_density_compare(L_values: Sequence[int], N: int, t: float, observable: SchurObservable,
                        fractions: Optional[Sequence[float]] = None) -> List[ComparisonRow]:
    """Discrete vs continuum expectation of one eigen-observable per ring size.

    The chain runs n = floor(L^2 t) steps from sites floor(L u_i); the
    Dyson side is evaluated at the matched time n / L^2 from the same
    angles, so the difference only carries the per-step eigenvalue error.
    """
    if N > 6:
        raise InvalidArgumentError("low-density comparison is limited to N <= 6", N=N)
    m = observable.index(N)
    rows = []
    with stage(logger, "low-density", N=N, t=t, observable=str(observable)):
        for L in L_values:
            params = LatticeParams(L=L, N=N)
            sites = spread_sites(L, N, fractions)
            x = 2 * np.pi * np.asarray(sites) / L
            n = int(floor(L * L * t + 1e-9))
            f0 = eigenfunction(m, x)
            discrete = discrete_eigenvalue(m, params) ** n * f0
            continuous = semigroup_moment(observable, n / (L * L), x).value
            rows.append(ComparisonRow(L, str(observable), complex(discrete), complex(continuous),
                                      float(abs(discrete - continuous))))
    return rows


def convergence_ratios(rows: Sequence[ComparisonRow]) -> List[float]:
    """abs_err(L) / abs_err(2L) over consecutive rows."""
    return [a.abs_err / b.abs_err for a, b in zip(rows, rows[1:]) if b.abs_err > 0]
