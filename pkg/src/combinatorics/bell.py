"""Partial exponential Bell polynomials B_{n,k}."""
from math import factorial
from typing import Sequence

from ..core.errors import InvalidArgumentError
from .partitions import enumerate_partitions


def bell_partial(n: int, k: int, x: Sequence[complex]) -> complex:
    """B_{n,k}(x_1, ..., x_{n-k+1}) as a sum over partitions of n with k parts.

    Each partition with c_j parts equal to j contributes
    n! / prod(j!^{c_j} c_j!) * prod x_j^{c_j}. Integer inputs give an exact
    integer.
    """
    if not 1 <= k <= n:
        raise InvalidArgumentError("bell_partial needs 1 <= k <= n", n=n, k=k)
    if len(x) < n - k + 1:
        raise InvalidArgumentError("too few arguments for bell_partial", n=n, k=k, given=len(x))
    total = 0
    for pi in enumerate_partitions(n):
        if pi.length != k:
            continue
        denom = 1
        term = 1
        for j, c in pi.multiplicities().items():
            denom *= factorial(j) ** c * factorial(c)
            term *= x[j - 1] ** c
        total += factorial(n) // denom * term
    return total
