"""Symmetric-group characters by the Murnaghan-Nakayama rule.

All arithmetic is on Python integers, so the values stay exact whatever
their size. Border strips are removed on the beta-set (abacus) of the shape:
sliding a bead from b to b - r removes a strip of size r whose height is the
number of beads strictly between the two positions.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from ..core.errors import InvalidArgumentError
from .cache import character_cache
from .partitions import Partition, as_partition, cycle_index, enumerate_partitions, hook_partition

logger = logging.getLogger(__name__)


def _beta_set(parts: Tuple[int, ...]) -> Tuple[int, ...]:
    m = len(parts)
    return tuple(parts[i] + (m - 1 - i) for i in range(m))


def _from_beta(beta: Tuple[int, ...]) -> Tuple[int, ...]:
    beads = sorted(beta, reverse=True)
    m = len(beads)
    parts = tuple(beads[i] - (m - 1 - i) for i in range(m))
    return tuple(p for p in parts if p > 0)


def border_strips(parts: Tuple[int, ...], r: int) -> List[Tuple[Tuple[int, ...], int]]:
    """All (shape with a size-r border strip removed, strip height)."""
    beta = _beta_set(parts)
    occupied = set(beta)
    out = []
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        height = sum(1 for c in beta if target < c < b)
        rest = tuple(c for c in beta if c != b) + (target,)
        out.append((_from_beta(rest), height))
    return out


@lru_cache(maxsize=200_000)
def _mn(parts: Tuple[int, ...], cycles: Tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not parts else 0
    r, rest = cycles[0], cycles[1:]
    total = 0
    for shape, height in border_strips(parts, r):
        total += (-1) ** height * _mn(shape, rest)
    return total


@lru_cache(maxsize=200_000)
def _hook_char(n: int, k: int, cycles: Tuple[int, ...]) -> int:
    if hook_partition(n, k) is None:
        return 0
    if not cycles:
        return 1 if n == 0 else 0
    r, rest = cycles[0], cycles[1:]
    if r == n:
        # the whole hook is one strip of height k
        return (-1) ** k if not rest else 0
    # strip at the foot of the leg, then strip at the end of the arm
    return (-1) ** (r - 1) * _hook_char(n - r, k - r, rest) + _hook_char(n - r, k, rest)


def hook_character(n: int, k: int, pi) -> int:
    """chi^{n|k}_pi by the two-term hook recursion; 0 for out-of-range k."""
    pi = as_partition(pi)
    if pi.weight != n:
        raise InvalidArgumentError("weight mismatch", n=n, pi=str(pi))
    return _hook_char(n, k, pi.parts)


def mn_character(lam, pi) -> int:
    """Irreducible character chi^lam evaluated on the class of cycle type pi."""
    lam, pi = as_partition(lam), as_partition(pi)
    if lam.weight != pi.weight:
        raise InvalidArgumentError("weight mismatch", lam=str(lam), pi=str(pi))
    if lam.is_hook() and lam.weight > 0:
        n = lam.weight
        return _hook_char(n, lam.length - 1, pi.parts)
    cached = character_cache().get(lam, pi)
    if cached is not None:
        return cached
    value = _mn(lam.parts, pi.parts)
    character_cache().put(lam, pi, value)
    return value


def character_table(n: int) -> Dict[Partition, Dict[Partition, int]]:
    """Rows indexed by irreducible lam, columns by cycle type pi."""
    classes = enumerate_partitions(n)
    return {lam: {pi: mn_character(lam, pi) for pi in classes} for lam in classes}


def hook_char_sum(pi, j: int) -> int:
    """Sum_k (-1)^k chi^{n|k}_pi (n-2k-1)^j, evaluated term by term."""
    pi = as_partition(pi)
    ell = pi.length
    if not 0 <= j <= ell - 1:
        raise InvalidArgumentError("j must lie in [0, l(pi)-1]", pi=str(pi), j=j)
    n = pi.weight
    return sum((-1) ** k * _hook_char(n, k, pi.parts) * (n - 2 * k - 1) ** j for k in range(n))


def hook_char_sum_closed_form(pi, j: int) -> int:
    """Closed form of hook_char_sum: 0 below l-1, 2^{l-1}(l-1)! prod pi_i at l-1."""
    pi = as_partition(pi)
    ell = pi.length
    if j < ell - 1:
        return 0
    if j == ell - 1:
        prod = 1
        for p in pi.parts:
            prod *= p
        fact = 1
        for i in range(2, ell):
            fact *= i
        return 2 ** (ell - 1) * fact * prod
    raise InvalidArgumentError("closed form only covers j <= l(pi)-1", pi=str(pi), j=j)


def frobenius_p_to_s(pi) -> Dict[Partition, int]:
    """Coefficients of p_pi in the Schur basis: p_pi = sum_lam chi^lam_pi s_lam."""
    pi = as_partition(pi)
    out = {}
    for lam in enumerate_partitions(pi.weight):
        c = mn_character(lam, pi)
        if c:
            out[lam] = c
    return out


def s_to_p(lam) -> Dict[Partition, Fraction]:
    """Inverse transform: s_lam = sum_pi chi^lam_pi / z_pi p_pi."""
    lam = as_partition(lam)
    out = {}
    for pi in enumerate_partitions(lam.weight):
        c = mn_character(lam, pi)
        if c:
            out[pi] = Fraction(c, cycle_index(pi))
    return out
