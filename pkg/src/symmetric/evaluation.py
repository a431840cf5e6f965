"""Evaluation of symmetric functions at tuples of unit-modulus points.

Schur polynomials default to the bialternant ratio a_{lam+delta}/a_delta,
solved through a complex LU factorization of the Vandermonde matrix. When
the Vandermonde product is below ``SCHUR_COND_FLOOR`` the semistandard
tableau sum is used instead for small weights.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..combinatorics.partitions import Partition, as_partition
from ..core.config import settings
from ..core.errors import DegenerateEvaluationError, InvalidArgumentError

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12


def as_points(z) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if pts.ndim != 1:
        raise InvalidArgumentError("points must be a flat sequence", shape=pts.shape)
    return pts


def check_unit(z, tol: float = UNIT_TOL) -> np.ndarray:
    pts = as_points(z)
    dev = np.max(np.abs(np.abs(pts) - 1.0)) if pts.size else 0.0
    if dev > tol:
        raise InvalidArgumentError("points must lie on the unit circle", deviation=float(dev))
    return pts


def roots_of_unity(sites: Iterable[float], L: int, shift: float = 0.0) -> np.ndarray:
    """exp(2i pi (site + shift) / L) for each site."""
    s = np.asarray(list(sites), dtype=np.float64)
    return np.exp(2j * np.pi * (s + shift) / L)


def random_sites(rng: np.random.Generator, L: int, N: int) -> Tuple[int, ...]:
    return tuple(int(v) for v in np.sort(rng.choice(L, size=N, replace=False)))


def random_root_tuple(rng: np.random.Generator, L: int, N: int) -> np.ndarray:
    """N pairwise distinct L-th roots of unity."""
    return roots_of_unity(random_sites(rng, L, N), L)


def random_unit_tuple(rng: np.random.Generator, N: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(N))


def vandermonde(z) -> complex:
    """prod_{i<j} (z_i - z_j), the determinant of [z_j^{N-1-i}]."""
    pts = as_points(z)
    out = 1.0 + 0.0j
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            out *= pts[i] - pts[j]
    return out


def _alternant(exponents: Sequence[int], pts: np.ndarray) -> np.ndarray:
    return np.power.outer(pts, np.asarray(exponents)).T


def schur_eval(lam, z, allow_tableau: bool = True) -> complex:
    """s_lam(z_1, ..., z_N); exactly 0 when lam has more than N parts."""
    lam = as_partition(lam)
    pts = as_points(z)
    N = len(pts)
    if lam.length > N:
        return 0.0 + 0.0j
    if lam.weight == 0:
        return 1.0 + 0.0j
    if N == 1:
        return complex(pts[0] ** lam[0])

    vand = vandermonde(pts)
    if abs(vand) < settings.SCHUR_COND_FLOOR:
        if allow_tableau and lam.weight <= settings.TABLEAU_MAX_WEIGHT:
            logger.debug("vandermonde %.3e below floor, tableau path for %s", abs(vand), lam)
            return schur_tableau_eval(lam, pts)
        raise DegenerateEvaluationError(
            "points too close for the determinant ratio",
            diagnostics={"vandermonde": abs(vand), "weight": lam.weight},
            partition=str(lam),
        )

    delta = list(range(N - 1, -1, -1))
    num = _alternant([lam[i] + delta[i] for i in range(N)], pts)
    den = _alternant(delta, pts)
    lu, piv = linalg.lu_factor(den, check_finite=False)
    ratio = linalg.lu_solve((lu, piv), num, check_finite=False)
    return complex(np.linalg.det(ratio))


def power_sum_eval(n: int, z) -> complex:
    """p_n(z) = sum z_i^n, negative n allowed; p_0 = N."""
    pts = as_points(z)
    if n < 0 and np.any(pts == 0):
        raise InvalidArgumentError("negative power sum at a zero point", n=n)
    return complex(np.sum(pts ** n))


def power_sum_product(pi, z) -> complex:
    out = 1.0 + 0.0j
    for part in as_partition(pi):
        out *= power_sum_eval(part, z)
    return out


def elementary_eval(k: int, z) -> complex:
    """e_k(z) read off the coefficients of prod (x - z_i)."""
    pts = as_points(z)
    if k < 0 or k > len(pts):
        return 0.0 + 0.0j
    coeffs = np.poly(pts) if len(pts) else np.array([1.0])
    return complex((-1) ** k * coeffs[k])


def schur_at_ones(lam, N: int) -> Fraction:
    """s_lam(1, ..., 1) = prod_{i<j} (lam_i - lam_j + j - i) / (j - i)."""
    lam = as_partition(lam)
    if lam.length > N:
        return Fraction(0)
    out = Fraction(1)
    for i in range(N):
        for j in range(i + 1, N):
            out *= Fraction(lam[i] - lam[j] + j - i, j - i)
    return out


# --- tableau oracles ---

def _skew_cells(lam: Partition, mu: Partition) -> List[Tuple[int, int]]:
    return [(r, c) for r in range(lam.length) for c in range(mu[r], lam[r])]


def skew_schur_tableau_eval(lam, mu, z) -> complex:
    """s_{lam/mu}(z) by backtracking over semistandard fillings of lam/mu."""
    lam, mu = as_partition(lam), as_partition(mu)
    pts = as_points(z)
    N = len(pts)
    if not lam.contains(mu):
        return 0.0 + 0.0j
    cells = _skew_cells(lam, mu)
    if not cells:
        return 1.0 + 0.0j

    filling: Dict[Tuple[int, int], int] = {}
    total = 0.0 + 0.0j

    def is_valid(row: int, col: int, val: int) -> bool:
        left = filling.get((row, col - 1))
        if left is not None and val < left:
            return False
        above = filling.get((row - 1, col))
        if above is not None and val <= above:
            return False
        return True

    def backtrack(pos: int, weight: complex):
        nonlocal total
        if pos == len(cells):
            total += weight
            return
        row, col = cells[pos]
        for val in range(N):
            if not is_valid(row, col, val):
                continue
            filling[(row, col)] = val
            backtrack(pos + 1, weight * pts[val])
            del filling[(row, col)]

    backtrack(0, 1.0 + 0.0j)
    return complex(total)


def schur_tableau_eval(lam, z) -> complex:
    lam = as_partition(lam)
    if lam.length > len(as_points(z)):
        return 0.0 + 0.0j
    return skew_schur_tableau_eval(lam, Partition(()), z)


def relative_residual(a: complex, b: complex, scale: Optional[float] = None) -> float:
    ref = max(1.0, abs(b)) if scale is None else max(1.0, scale)
    return abs(a - b) / ref


def schur_eval_batch(lam, points: np.ndarray) -> np.ndarray:
    """s_lam on each row of an (M, N) array of pairwise distinct points."""
    lam = as_partition(lam)
    pts = np.asarray(points, dtype=np.complex128)
    M, N = pts.shape
    if lam.length > N:
        return np.zeros(M, dtype=np.complex128)
    if lam.weight == 0:
        return np.ones(M, dtype=np.complex128)
    delta = np.arange(N - 1, -1, -1)
    exps = np.asarray(lam.padded(N)) + delta
    diffs = pts[:, :, None] - pts[:, None, :]
    iu = np.triu_indices(N, k=1)
    vand = np.prod(diffs[:, iu[0], iu[1]], axis=1) if N > 1 else np.ones(M, dtype=np.complex128)
    bad = np.abs(vand) < settings.SCHUR_COND_FLOOR
    if np.any(bad):
        raise DegenerateEvaluationError(
            "coincident points in batch evaluation",
            diagnostics={"rows": int(bad.sum()), "min_vandermonde": float(np.abs(vand).min())},
            partition=str(lam),
        )
    num = pts[:, None, :] ** exps[None, :, None]
    return np.linalg.det(num) / vand
