"""Integer partitions, hooks and double hooks.

Partitions are immutable values; trailing zeros are dropped on construction
so that (2, 1, 0) == (2, 1). Hooks outside their admissible range evaluate
to the zero element, represented by ``None`` wherever a shape is returned.
"""
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, List, Optional, Tuple

from ..core.errors import InvalidArgumentError


@dataclass(frozen=True, order=True)
class Partition:
    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise InvalidArgumentError("partition parts must be nonnegative", parts=parts)
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InvalidArgumentError("partition parts must be weakly decreasing", parts=parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        # 0-based, zero beyond the length
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def padded(self, n: int) -> Tuple[int, ...]:
        if self.length > n:
            raise InvalidArgumentError("partition longer than requested padding", partition=str(self), n=n)
        return self.parts + (0,) * (n - self.length)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def multiplicities(self) -> Counter:
        return Counter(self.parts)

    def contains(self, other: "Partition") -> bool:
        if other.length > self.length:
            return False
        return all(self[i] >= other[i] for i in range(other.length))

    def is_hook(self) -> bool:
        return self.length <= 1 or self[1] <= 1

    def fits_box(self, rows: int, cols: int) -> bool:
        return self.length <= rows and (self.length == 0 or self.parts[0] <= cols)


EMPTY = Partition(())


def as_partition(value) -> Partition:
    if isinstance(value, Partition):
        return value
    return Partition(tuple(value))


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> List[Partition]:
    """All partitions of n in reverse lexicographic order, (n) first."""
    if n < 0:
        raise InvalidArgumentError("cannot partition a negative integer", n=n)
    return [Partition(p) for p in _partitions(n, n)]


def partitions_in_box(rows: int, cols: int) -> List[Partition]:
    """Partitions with at most ``rows`` parts, each at most ``cols``."""
    out: List[Partition] = []

    def build(prefix: Tuple[int, ...], cap: int):
        out.append(Partition(prefix))
        if len(prefix) == rows:
            return
        for p in range(1, cap + 1):
            build(prefix + (p,), p)

    build((), cols)
    return sorted(out, key=lambda lam: (lam.weight, tuple(-p for p in lam.parts)))


def cycle_index(pi) -> int:
    """z_pi = prod_k k^{l_k} l_k! for the cycle type pi."""
    pi = as_partition(pi)
    z = 1
    for k, l in pi.multiplicities().items():
        z *= k ** l * factorial(l)
    return z


def hook_partition(n: int, k: int) -> Optional[Partition]:
    """{n|k} = (n-k, 1^k); None (the zero element) when k is out of range."""
    if n == 0:
        return EMPTY if k == 0 else None
    if n < 0 or k < 0 or k > n - 1:
        return None
    return Partition((n - k,) + (1,) * k)


@dataclass(frozen=True)
class Hook:
    n: int
    k: int

    @property
    def partition(self) -> Optional[Partition]:
        return hook_partition(self.n, self.k)

    def conjugate(self) -> "Hook":
        return Hook(self.n, self.n - self.k - 1)


def double_hook_partition(n: int, k: int, l: int, L: int, N: int) -> Partition:
    """{n|k,l} = (L-n-(N-1-l), n-k+1, 2^k, 1^{N-2-l-k})."""
    if n < 1 or not (0 <= k <= n - 1) or not (0 <= l <= n - 1):
        raise InvalidArgumentError("double hook indices out of range", n=n, k=k, l=l)
    if N < 2 or N - 2 - l - k < 0:
        raise InvalidArgumentError("double hook needs N >= k + l + 2", n=n, k=k, l=l, N=N)
    first = L - n - (N - 1 - l)
    if first < n - k + 1:
        raise InvalidArgumentError("ring too small for double hook", n=n, k=k, l=l, L=L, N=N)
    return Partition((first, n - k + 1) + (2,) * k + (1,) * (N - 2 - l - k))
