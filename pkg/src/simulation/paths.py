"""Initial conditions, ensemble statistics, windings and the conditioned-walk comparison."""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ..core.errors import InvalidArgumentError
from ..messep.lattice import (
    Configuration,
    LatticeParams,
    StateSpace,
    compact_configuration,
    make_configuration,
)
from ..messep.spectral import adjacency_matrix, perron_value
from .chain import EnsembleRecord, trajectory

logger = logging.getLogger(__name__)


# --- 1. INITIAL CONDITIONS ---

def packed_block(params: LatticeParams) -> Configuration:
    """N contiguous particles centred on site 0, the discrete step profile."""
    return compact_configuration(params)


def _density_on_sites(density: Callable[[np.ndarray], np.ndarray], L: int) -> np.ndarray:
    x = 2 * np.pi * np.arange(L) / L
    w = np.clip(np.asarray(density(x), dtype=np.float64), 0.0, None)
    if w.sum() <= 0:
        raise InvalidArgumentError("density has no mass on the lattice")
    return w / w.sum()


def quantile_placement(density: Callable[[np.ndarray], np.ndarray], params: LatticeParams,
                       fine: int = 64) -> Configuration:
    """Deterministic placement at the (k + 1/2)/N quantiles of f0 on [-pi, pi).

    Collisions are resolved by moving to the nearest free site, so the
    result always respects exclusion.
    """
    L, N = params.L, params.N
    x = np.linspace(-np.pi, np.pi, fine * L, endpoint=False)
    w = np.clip(np.asarray(density(np.mod(x, 2 * np.pi)), dtype=np.float64), 0.0, None)
    cdf = np.cumsum(w)
    if cdf[-1] <= 0:
        raise InvalidArgumentError("density has no mass")
    cdf /= cdf[-1]
    targets = (np.arange(N) + 0.5) / N
    angles = x[np.searchsorted(cdf, targets)]
    occupied: set = set()
    for a in angles:
        s = int(math.floor(L * a / (2 * np.pi) + 0.5)) % L
        offset = 0
        while True:
            for cand in (s + offset, s - offset):
                c = cand % L
                if c not in occupied:
                    occupied.add(c)
                    break
            else:
                offset += 1
                continue
            break
    return make_configuration(occupied, params)


def thinned_sample(density: Callable[[np.ndarray], np.ndarray], params: LatticeParams,
                   rng: np.random.Generator) -> Configuration:
    """i.i.d. draws from f0 discretized on the sites, rejecting occupied sites."""
    probs = _density_on_sites(density, params.L)
    if np.count_nonzero(probs) < params.N:
        raise InvalidArgumentError("density support smaller than the particle count", N=params.N)
    occupied: set = set()
    while len(occupied) < params.N:
        occupied.add(int(rng.choice(params.L, p=probs)))
    return make_configuration(occupied, params)


# --- 2. ENSEMBLE STATISTICS ---

@dataclass
class MomentEstimate:
    t: float
    n: int
    mean: complex
    stderr: float


def ensemble_moments(record: EnsembleRecord, n: int) -> List[MomentEstimate]:
    """Mean and standard error of M_n across paths at every recorded time."""
    out = []
    P = record.lifts.shape[0]
    for r, t in enumerate(record.times):
        m = np.mean(np.exp(1j * n * record.angles(r)), axis=1)
        mean = complex(m.mean())
        stderr = float(np.sqrt(np.var(m.real) + np.var(m.imag)) / math.sqrt(max(P - 1, 1)))
        out.append(MomentEstimate(t=t, n=n, mean=mean, stderr=stderr))
    return out


def moment_rows(record: EnsembleRecord, n_max: int) -> List[Tuple[int, float, int, float, float]]:
    """(path_id, t, n, Re M_n, Im M_n) rows for CSV dumps."""
    rows = []
    for r, t in enumerate(record.times):
        ang = record.angles(r)
        for n in range(1, n_max + 1):
            m = np.mean(np.exp(1j * n * ang), axis=1)
            for path, v in enumerate(m):
                rows.append((path, t, n, float(v.real), float(v.imag)))
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    return rows


def empirical_density(angles: np.ndarray, M: int, bandwidth: float) -> np.ndarray:
    """Periodic Gaussian-smoothed density of the angles on x_j = 2 pi j / M.

    ``angles`` may be (N,) or (paths, N); paths are pooled. The result
    integrates to 1 with the trapezoid rule.
    """
    a = np.ravel(np.asarray(angles, dtype=np.float64))
    k = np.fft.fftfreq(M, d=1.0 / M)
    coeff = np.array([np.mean(np.exp(-1j * kk * a)) for kk in k])
    damp = np.exp(-0.5 * (bandwidth * k) ** 2)
    return np.fft.ifft(coeff * damp).real * M / (2 * np.pi)


# --- 3. WINDINGS ---

def _increments(history: np.ndarray) -> np.ndarray:
    h = np.asarray(history, dtype=np.int64)
    inc = np.diff(h, axis=0)
    if np.any(np.abs(inc) > 1):
        raise InvalidArgumentError("winding needs increments in {-1, 0, 1}", max_step=int(np.abs(inc).max()))
    return inc


def winding(history: np.ndarray, L: int) -> np.ndarray:
    """Winding angle per particle from the phase increments.

    (2 pi / L) / sin(2 pi / L) * sum_k Im exp(2i pi (s_{k+1} - s_k) / L),
    which equals 2 pi (s_n - s_0) / L for unit steps.
    """
    if L < 3:
        raise InvalidArgumentError("winding formula needs L >= 3", L=L)
    inc = _increments(history)
    phase = np.imag(np.exp(2j * np.pi * inc / L)).sum(axis=0)
    return (2 * np.pi / L) / math.sin(2 * math.pi / L) * phase


def winding_direct(history: np.ndarray, L: int) -> np.ndarray:
    h = np.asarray(history, dtype=np.int64)
    return 2 * np.pi * (h[-1] - h[0]) / L


# --- 4. STATIONARITY ---

@dataclass
class OccupationRecord:
    params: LatticeParams
    steps: int
    counts: np.ndarray
    flux: Dict[Tuple[int, int], int]

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.counts.sum()


def config_indices(history: np.ndarray, L: int) -> np.ndarray:
    """Colex rank of every row, sum_k C(x_k, k+1) over the sorted sites."""
    configs = np.sort(np.mod(history, L), axis=1)
    ranks = sum(special.comb(configs[:, k], k + 1) for k in range(configs.shape[1]))
    return np.rint(ranks).astype(np.int64)


def stationary_occupation(config: Sequence[int], params: LatticeParams, n_steps: int,
                          seed: int) -> OccupationRecord:
    """Occupation counts and directed edge flux of one long chain."""
    hist = trajectory(config, params, n_steps, seed)
    idx = config_indices(hist, params.L)
    counts = np.bincount(idx[1:], minlength=params.n_states)
    return OccupationRecord(params=params, steps=n_steps, counts=counts, flux=edge_flux(idx))


def edge_flux(idx: np.ndarray) -> Dict[Tuple[int, int], int]:
    pairs, counts = np.unique(np.stack([idx[:-1], idx[1:]], axis=1), axis=0, return_counts=True)
    return {(int(a), int(b)): int(c) for (a, b), c in zip(pairs, counts)}


# --- 5. CONDITIONED SIMPLE WALK ---

def _survival_vectors(params: LatticeParams, space: StateSpace, horizons: Sequence[int]) -> Dict[int, np.ndarray]:
    A = adjacency_matrix(params, space)
    v = np.ones(len(space))
    wanted = set(horizons)
    out = {0: v.copy()} if 0 in wanted else {}
    for j in range(1, max(horizons) + 1):
        v = A @ v / (2 * params.N)
        if j in wanted:
            out[j] = v.copy()
    return out


def conditioned_srw_compare(xi0: Sequence[int], n: int, m: int, params: LatticeParams) -> float:
    """TV distance between the first n steps of the N-particle simple walk
    conditioned on no collision up to time m and the exclusion chain.

    Both path laws depend on a path only through its end point e(n):
    (2N)^{-n} P_{e(n)}(T > m - n) / P_{xi0}(T > m) for the walk and
    psi(e(n)) / (rho^n psi(xi0)) for the chain, so the sum over paths
    collapses onto A^n(xi0, .) path counts.
    Ring size is bounded by STATE_CAP (ResourceCapError) rather than by a
    fixed L <= 7 limit.
    """
    if params.L < 3:
        raise InvalidArgumentError("path comparison needs L >= 3", L=params.L)
    if n < 0 or m < n:
        raise InvalidArgumentError("need 0 <= n <= m", n=n, m=m)
    space = StateSpace.build(params)
    xi0 = make_configuration(xi0, params)
    i0 = space.index[xi0]
    surv = _survival_vectors(params, space, [m - n, m])

    A = adjacency_matrix(params, space)
    counts = np.zeros(len(space))
    counts[i0] = 1.0
    for _ in range(n):
        counts = A.T @ counts

    psi = np.array([perron_value(c, params) for c in space.configs])
    walk = (2 * params.N) ** (-n) * surv[m - n] / surv[m][i0]
    chain = psi / (params.rho ** n * psi[i0])
    return float(0.5 * np.sum(counts * np.abs(chain - walk)))
