"""Hook and double-hook identities for Schur values at roots of unity.

Every check returns an absolute residual; the callers decide the tolerance.
Hooks outside their admissible range are the zero function and
s_{0|j} = delta_{0j}.
"""
import logging
from typing import Optional

import numpy as np

from ..combinatorics.characters import mn_character
from ..combinatorics.partitions import (
    Hook,
    Partition,
    as_partition,
    cycle_index,
    double_hook_partition,
    enumerate_partitions,
    hook_partition,
)
from ..core.errors import InvalidArgumentError
from .evaluation import (
    as_points,
    check_unit,
    power_sum_eval,
    power_sum_product,
    schur_eval,
    skew_schur_tableau_eval,
)

logger = logging.getLogger(__name__)


def parity_sign(N: int) -> int:
    """(-1)^{2 gamma}: +1 for odd N, -1 for even N."""
    return 1 if N % 2 else -1


def hook_schur(n: int, k: int, z) -> complex:
    lam = hook_partition(n, k)
    if lam is None:
        return 0.0 + 0.0j
    return schur_eval(lam, z)


def hook_expansion_check(n: int, z) -> float:
    """|p_n(z) - sum_k (-1)^k s_{n|k}(z)|."""
    if n < 1:
        raise InvalidArgumentError("hook expansion needs n >= 1", n=n)
    pts = as_points(z)
    rhs = sum((-1) ** k * hook_schur(n, k, pts) for k in range(n))
    return float(abs(power_sum_eval(n, pts) - rhs))


def conj_hook_identity(n: int, k: int, z, L: int, N: Optional[int] = None) -> float:
    """|conj s_{n|k}(z) - (-1)^{2 gamma} s_{L-n|N-k-1}(z)| for distinct L-th roots z."""
    pts = as_points(z)
    N = len(pts) if N is None else N
    if len(pts) != N:
        raise InvalidArgumentError("point count does not match N", N=N, points=len(pts))
    if L - n <= 0:
        raise InvalidArgumentError("conjugate hook needs L > n", n=n, L=L)
    lhs = np.conj(hook_schur(n, k, pts))
    rhs = parity_sign(N) * hook_schur(L - n, N - k - 1, pts)
    return float(abs(lhs - rhs))


def _check_double_hook_range(n: int, L: int, N: int) -> None:
    if n < 1:
        raise InvalidArgumentError("double hooks need n >= 1", n=n)
    if L < 2 * n + N:
        raise InvalidArgumentError("double hooks need L >= 2n + N", n=n, L=L, N=N)


def double_hook_schur(n: int, k: int, l: int, z, L: int) -> complex:
    pts = as_points(z)
    return schur_eval(double_hook_partition(n, k, l, L, len(pts)), pts)


def double_hook_expansion(n: int, z, L: int) -> float:
    """|p_n p_{-n}(z) - (-1)^{2 gamma} sum_{k,l} (-1)^{k+l} s_{n|k,l}(z) - n|."""
    pts = as_points(z)
    N = len(pts)
    _check_double_hook_range(n, L, N)
    lhs = power_sum_eval(n, pts) * power_sum_eval(-n, pts)
    acc = 0.0 + 0.0j
    for k in range(n):
        for l in range(n):
            if N - 2 - l - k < 0:
                # no such shape: the term is the zero element
                continue
            acc += (-1) ** (k + l) * double_hook_schur(n, k, l, pts, L)
    return float(abs(lhs - parity_sign(N) * acc - n))


def skew_hook_eval(outer: Hook, inner: Hook, z, conjugate_inner: bool = False) -> complex:
    """s_{{n|k} \\ {m|i}}(z), or with the inner hook conjugated.

    The skew shape splits into an arm row and a leg column, so it is
    h_a e_b = s_{n-m|k-i} + s_{n-m|k-i-1}.
    """
    pts = as_points(z)
    if conjugate_inner:
        inner = inner.conjugate()
    outer_shape, inner_shape = outer.partition, inner.partition
    if outer_shape is None or inner_shape is None:
        return 0.0 + 0.0j
    if not outer_shape.contains(inner_shape):
        return 0.0 + 0.0j
    if inner.n == 0:
        return schur_eval(outer_shape, pts)
    d = outer.n - inner.n
    j = outer.k - inner.k
    return hook_schur(d, j, pts) + hook_schur(d, j - 1, pts)


def skew_hook_check(outer: Hook, inner: Hook, z, conjugate_inner: bool = False) -> float:
    """Skew-hook formula against the skew-tableau oracle."""
    formula = skew_hook_eval(outer, inner, z, conjugate_inner)
    inner_shape = (inner.conjugate() if conjugate_inner else inner).partition
    outer_shape = outer.partition
    if outer_shape is None or inner_shape is None:
        return float(abs(formula))
    return float(abs(formula - skew_schur_tableau_eval(outer_shape, inner_shape, z)))


def rational_double_hook(n: int, k: int, l: int, z) -> complex:
    """(-1)^{N-1} sum_tau (-1)^{|tau|} s_{{n|k}\\tau}(z) conj s_{{n|l}\\tau'}(z) over tau = empty or {m|i}."""
    pts = as_points(z)
    N = len(pts)
    outer_k, outer_l = Hook(n, k), Hook(n, l)
    total = hook_schur(n, k, pts) * np.conj(hook_schur(n, l, pts))
    for m in range(1, n + 1):
        for i in range(m):
            tau = Hook(m, i)
            left = skew_hook_eval(outer_k, tau, pts)
            if left == 0:
                continue
            right = skew_hook_eval(outer_l, tau, pts, conjugate_inner=True)
            total += (-1) ** m * left * np.conj(right)
    return (-1) ** (N - 1) * total


def rational_double_hook_check(n: int, k: int, l: int, z, L: int) -> float:
    """|s_{n|k,l}(z) - rational expansion| at L-th roots of unity."""
    pts = as_points(z)
    _check_double_hook_range(n, L, len(pts))
    direct = double_hook_schur(n, k, l, pts, L)
    return float(abs(direct - rational_double_hook(n, k, l, pts)))


def conj_schur_identity(lam, ell: int, z) -> float:
    """|conj s_lam(z) - (prod z)^{-ell} s_mu(z)| with mu_i = ell - lam_{N+1-i}."""
    lam = as_partition(lam)
    pts = check_unit(z)
    N = len(pts)
    if lam.length > N:
        raise InvalidArgumentError("partition longer than the point tuple", lam=str(lam), N=N)
    if ell < lam[0]:
        raise InvalidArgumentError("ell must dominate the first part", lam=str(lam), ell=ell)
    mu = Partition(tuple(ell - lam[N - 1 - i] for i in range(N)))
    lhs = np.conj(schur_eval(lam, pts))
    rhs = np.prod(pts) ** (-ell) * schur_eval(mu, pts)
    return float(abs(lhs - rhs))


def frobenius_check(lam, z) -> float:
    """|s_lam(z) - sum_pi chi^lam_pi p_pi(z) / z_pi|."""
    lam = as_partition(lam)
    pts = as_points(z)
    acc = 0.0 + 0.0j
    for pi in enumerate_partitions(lam.weight):
        c = mn_character(lam, pi)
        if c:
            acc += c * power_sum_product(pi, pts) / cycle_index(pi)
    return float(abs(schur_eval(lam, pts) - acc))
