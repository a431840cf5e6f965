"""The maximal-entropy exclusion kernel and its Schur spectral decomposition.

P(xi, eta) = A(xi, eta) psi(eta) / (rho psi(xi)) where A is the adjacency of
the configuration graph and psi its Perron vector. The Schur functions
s_lam(exp(2i pi eta / L)) over the box partitions form an orthonormal
eigenbasis in l2(mu), mu = psi^2, with eigenvalues rho_lam / rho_c.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from math import cos, floor, pi, prod, sin
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..combinatorics.partitions import as_partition, hook_partition
from ..core.errors import InvalidArgumentError
from ..core.logging import stage
from ..symmetric.evaluation import roots_of_unity, schur_eval, schur_eval_batch
from .lattice import (
    Configuration,
    LatticeParams,
    StateSpace,
    compact_configuration,
    config_from_partition,
    make_configuration,
    neighbours,
    partition_from_config,
    symmetric_positions,
)

logger = logging.getLogger(__name__)

Observable = Union[Callable[[Configuration], complex], np.ndarray]


# --- 1. PERRON DATA ---

def perron_value(eta: Sequence[int], params: LatticeParams) -> float:
    """psi(eta) = 2^{N(N-1)/2} L^{-N/2} prod_{i<j} sin(pi (eta_j - eta_i) / L)."""
    L, N = params.L, params.N
    eta = sorted(eta)
    sines = prod(sin(pi * (eta[j] - eta[i]) / L) for i in range(N) for j in range(i + 1, N))
    return 2.0 ** (N * (N - 1) / 2) * L ** (-N / 2) * sines


def perron(params: LatticeParams) -> Tuple[Callable[[Sequence[int]], float], float]:
    """(psi, rho) with rho = 2 sin(N pi / L) / sin(pi / L)."""
    return (lambda eta: perron_value(eta, params)), params.rho


def adjacency_matrix(params: LatticeParams, space: Optional[StateSpace] = None) -> sp.csr_matrix:
    space = space or StateSpace.build(params)
    rows, cols = [], []
    for i, xi in enumerate(space.configs):
        for eta, _, _ in neighbours(xi, params):
            rows.append(i)
            cols.append(space.index[eta])
    n = len(space)
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(n, n))


def graph_spectrum(params: LatticeParams) -> np.ndarray:
    """Eigenvalues of the explicit adjacency matrix, ascending."""
    A = adjacency_matrix(params).toarray()
    return np.linalg.eigvalsh(A)


# --- 2. EIGENVALUES ---

def eigenvalue_of(lam, params: LatticeParams) -> float:
    """r_lam = rho_lam / rho_c with rho_lam = 2 sum cos(2 pi (xi_i + gamma) / L)."""
    lam = as_partition(lam)
    config_from_partition(lam, params)
    L = params.L
    rho_lam = 2.0 * sum(cos(2 * pi * u / L) for u in symmetric_positions(lam, params))
    return rho_lam / params.rho


def _check_hook_indices(n: int, *legs: int) -> None:
    if n < 1:
        raise InvalidArgumentError("hook weight must be positive", n=n)
    for k in legs:
        if not 0 <= k <= n - 1:
            raise InvalidArgumentError("hook leg out of range", n=n, k=k)


def _shifted_sine(n: int, k: int, params: LatticeParams) -> float:
    L, N = params.L, params.N
    return sin(pi * N / L + pi * (n - 2 * k - 1) / L)


def hook_eigenvalue(n: int, k: int, params: LatticeParams) -> float:
    _check_hook_indices(n, k)
    L, N = params.L, params.N
    return 1.0 - 2.0 * sin(pi / L) * sin(pi * n / L) * _shifted_sine(n, k, params) / sin(pi * N / L)


def double_hook_eigenvalue(n: int, k: int, l: int, params: LatticeParams) -> float:
    _check_hook_indices(n, k, l)
    L, N = params.L, params.N
    if L < 2 * n + N:
        raise InvalidArgumentError("double hooks need L >= 2n + N", n=n, L=L, N=N)
    shift = _shifted_sine(n, k, params) + _shifted_sine(n, l, params)
    return 1.0 - 2.0 * sin(pi / L) * sin(pi * n / L) * shift / sin(pi * N / L)


def hook_in_box(n: int, k: int, params: LatticeParams) -> bool:
    lam = hook_partition(n, k)
    return lam is not None and lam.fits_box(params.N, params.L - params.N)


def double_hook_in_box(n: int, k: int, l: int, params: LatticeParams) -> bool:
    return params.N - 2 - l - k >= 0 and params.L >= 2 * n + params.N


# --- 3. KERNEL ---

@dataclass(frozen=True)
class SpectralKernel:
    params: LatticeParams
    space: StateSpace
    P: np.ndarray
    psi: np.ndarray
    rho: float
    mu: np.ndarray

    @property
    def configs(self) -> Tuple[Configuration, ...]:
        return self.space.configs

    def position(self, eta: Sequence[int]) -> int:
        return self.space.index[make_configuration(eta, self.params)]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """r_lam for the partition attached to each configuration, in state order."""
        return np.array([eigenvalue_of(lam, self.params) for lam in self.space.partitions])

    @cached_property
    def eigenvectors(self) -> np.ndarray:
        """Column j holds s_{lam_j} evaluated on every configuration."""
        pts = np.array([roots_of_unity(c, self.params.L) for c in self.configs])
        with stage(logger, "schur-eigenbasis", L=self.params.L, N=self.params.N, states=len(self.space)):
            cols = [schur_eval_batch(lam, pts) for lam in self.space.partitions]
        return np.column_stack(cols)

    def eigenpairs(self) -> List[Tuple[Configuration, float, np.ndarray]]:
        vecs = self.eigenvectors
        return [(c, float(r), vecs[:, j]) for j, (c, r) in enumerate(zip(self.configs, self.eigenvalues))]

    def values_of(self, f: Observable) -> np.ndarray:
        if callable(f):
            return np.array([f(c) for c in self.configs], dtype=np.complex128)
        arr = np.asarray(f, dtype=np.complex128)
        if arr.shape != (len(self.space),):
            raise InvalidArgumentError("observable array does not match the state space", shape=arr.shape)
        return arr

    def coefficients(self, f: Observable) -> np.ndarray:
        """<f, s_lam>_mu for every eigenfunction."""
        vals = self.values_of(f)
        return self.eigenvectors.conj().T @ (self.mu * vals)


def kernel(params: LatticeParams) -> SpectralKernel:
    with stage(logger, "kernel", L=params.L, N=params.N) as info:
        space = StateSpace.build(params)
        A = adjacency_matrix(params, space).toarray()
        psi = np.array([perron_value(c, params) for c in space.configs])
        rho = params.rho
        P = A * psi[None, :] / (rho * psi[:, None])
        mu = psi ** 2
        mu = mu / mu.sum()
        info["states"] = len(space)
        info["row_sum_dev"] = float(np.max(np.abs(P.sum(axis=1) - 1.0)))
    return SpectralKernel(params=params, space=space, P=P, psi=psi, rho=rho, mu=mu)


def detailed_balance_residual(k: SpectralKernel) -> float:
    flux = k.mu[:, None] * k.P
    return float(np.max(np.abs(flux - flux.T)))


def semigroup_apply(k: SpectralKernel, f: Observable, steps: int, eta: Sequence[int]) -> complex:
    """P^n f(eta) through the full spectral sum."""
    return complex(semigroup_vector(k, f, steps)[k.position(eta)])


def semigroup_vector(k: SpectralKernel, f: Observable, steps: int) -> np.ndarray:
    if steps < 0:
        raise InvalidArgumentError("step count must be nonnegative", steps=steps)
    coeff = k.coefficients(f)
    return k.eigenvectors @ (k.eigenvalues ** steps * coeff)


def matrix_power_apply(k: SpectralKernel, f: Observable, steps: int) -> np.ndarray:
    return np.linalg.matrix_power(k.P, steps) @ k.values_of(f)


# --- 4. GAP AND SURVIVAL ---

def spectral_gap(params: LatticeParams) -> float:
    """1 - r at the compact configuration with its top particle moved one site up."""
    L, p = params.L, params.p
    window = sorted(((s + p) % L) - p for s in compact_configuration(params))
    window[-1] += 1
    lam = partition_from_config(window, params)
    return 1.0 - eigenvalue_of(lam, params)


@dataclass
class GapRow:
    L: int
    N: int
    gap: float
    diffusive: float
    discrepancy: float
    scaled_cubic: float
    scaled_quartic: float


@dataclass
class GapTable:
    rows: List[GapRow]
    cubic_constant: float
    quartic_constant: float
    quartic_spread: float

    @property
    def stable(self) -> bool:
        return self.quartic_spread <= 0.2


def gap_asymptotics_check(L_values: Iterable[int], alpha: float = 0.5) -> GapTable:
    """Compare 1 - r_{(1)} with 2 pi^2 / L^2 across ring sizes.

    The discrepancy is O(L^-4); both L^3 d and L^4 d are tabulated and the
    spread of L^4 d over the upper half of the range is reported.
    """
    rows = []
    for L in sorted(L_values):
        N = max(1, min(L - 1, floor(alpha * L)))
        gap = spectral_gap(LatticeParams(L, N))
        diffusive = 2 * pi ** 2 / L ** 2
        d = abs(gap - diffusive)
        rows.append(GapRow(L, N, gap, diffusive, d, d * L ** 3, d * L ** 4))
    if not rows:
        raise InvalidArgumentError("no ring sizes given")
    upper = rows[len(rows) // 2:]
    quartic = np.array([r.scaled_quartic for r in upper])
    cubic = max(r.scaled_cubic for r in rows)
    spread = float((quartic.max() - quartic.min()) / quartic.mean())
    return GapTable(rows=rows, cubic_constant=cubic, quartic_constant=float(quartic.mean()), quartic_spread=spread)


def survival_curve(xi: Sequence[int], n_max: int, params: LatticeParams) -> np.ndarray:
    """P_xi(T > n) = (2N)^{-n} A^n 1 (xi) for n = 0..n_max."""
    space = StateSpace.build(params)
    A = adjacency_matrix(params, space)
    i = space.index[make_configuration(xi, params)]
    v = np.ones(len(space))
    out = [1.0]
    for _ in range(n_max):
        v = A @ v / (2 * params.N)
        out.append(float(v[i]))
    return np.array(out)


def survival_probability(xi: Sequence[int], n: int, params: LatticeParams) -> float:
    if n < 0:
        raise InvalidArgumentError("step count must be nonnegative", n=n)
    return float(survival_curve(xi, n, params)[-1])


# --- 5. REPORTS AND MOMENTS ---

@dataclass
class EigenbasisReport:
    L: int
    N: int
    states: int
    eigen_residual: float
    gram_deviation: float
    spectrum_deviation: float
    reversibility: float
    row_sum_deviation: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def eigenbasis_report(params: LatticeParams) -> EigenbasisReport:
    k = kernel(params)
    S = k.eigenvectors
    r = k.eigenvalues
    residual = float(np.max(np.abs(k.P @ S - S * r[None, :])))
    gram = S.conj().T @ (k.mu[:, None] * S)
    gram_dev = float(np.max(np.abs(gram - np.eye(len(r)))))
    spectrum = np.sort(r * k.rho)
    spectrum_dev = float(np.max(np.abs(spectrum - graph_spectrum(params))))
    return EigenbasisReport(
        L=params.L,
        N=params.N,
        states=len(r),
        eigen_residual=residual,
        gram_deviation=gram_dev,
        spectrum_deviation=spectrum_dev,
        reversibility=detailed_balance_residual(k),
        row_sum_deviation=float(np.max(np.abs(k.P.sum(axis=1) - 1.0))),
    )


def moment_observable(n: int, params: LatticeParams) -> Callable[[Configuration], complex]:
    """M_n(eta) = (1/N) sum_k exp(2i pi n eta_k / L)."""
    def f(eta: Configuration) -> complex:
        return complex(np.mean(roots_of_unity(eta, params.L) ** n))
    return f


def expected_moment(params: LatticeParams, start: Sequence[int], n: int, steps: int,
                    k: Optional[SpectralKernel] = None) -> complex:
    """E_start[M_n] after ``steps`` moves.

    Uses p_n = sum_k (-1)^k s_{n|k} when every contributing hook is in the
    box; otherwise falls back to the spectral sum on the full kernel.
    """
    start = make_configuration(start, params)
    if n == 0:
        return 1.0 + 0.0j
    if n < 0:
        return np.conj(expected_moment(params, start, -n, steps, k))
    pts = roots_of_unity(start, params.L)
    terms = []
    for j in range(n):
        lam = hook_partition(n, j)
        if lam.length > params.N:
            continue
        if not hook_in_box(n, j, params):
            terms = None
            break
        terms.append((-1) ** j * eigenvalue_of(lam, params) ** steps * schur_eval(lam, pts))
    if terms is not None:
        return complex(sum(terms) / params.N)
    logger.debug("hooks of %d leave the box at L=%d N=%d, using the kernel", n, params.L, params.N)
    k = k or kernel(params)
    return semigroup_apply(k, moment_observable(n, params), steps, start)


def variance_moment(params: LatticeParams, start: Sequence[int], n: int, steps: int,
                    k: Optional[SpectralKernel] = None) -> float:
    """Var_start(M_n) after ``steps`` moves: P^n |M_n|^2 - |P^n M_n|^2."""
    k = k or kernel(params)
    f = moment_observable(n, params)
    second = semigroup_apply(k, lambda eta: abs(f(eta)) ** 2, steps, start).real
    first = semigroup_apply(k, f, steps, start)
    return float(max(second - abs(first) ** 2, 0.0))
