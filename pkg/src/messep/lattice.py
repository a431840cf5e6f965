"""Ring lattice, configurations and the partition <-> configuration bijection.

Sites are 0..L-1. A configuration is a strictly increasing N-tuple of
sites. With p = N // 2 the partition lam sits on the sites
(lam_i + N - i - p) mod L, i = 1..N, so the empty partition is the
compact block centred on site 0.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, pi, sin
from typing import Dict, List, Optional, Sequence, Tuple

from ..combinatorics.partitions import Partition, as_partition, partitions_in_box
from ..core.config import settings
from ..core.errors import InvalidArgumentError, ResourceCapError

logger = logging.getLogger(__name__)

Configuration = Tuple[int, ...]


@dataclass(frozen=True)
class LatticeParams:
    L: int
    N: int

    def __post_init__(self):
        if self.L < 2:
            raise InvalidArgumentError("ring needs at least two sites", L=self.L)
        if not 1 <= self.N <= self.L - 1:
            raise InvalidArgumentError("particle count must satisfy 1 <= N <= L-1", L=self.L, N=self.N)

    @property
    def gamma(self) -> float:
        return 0.0 if self.N % 2 else 0.5

    @property
    def p(self) -> int:
        return self.N // 2

    @property
    def rho(self) -> float:
        """Perron eigenvalue of the configuration graph."""
        return 2.0 * sin(self.N * pi / self.L) / sin(pi / self.L)

    @property
    def n_states(self) -> int:
        return comb(self.L, self.N)

    @property
    def density(self) -> float:
        return self.N / self.L


def make_configuration(sites: Sequence[int], params: LatticeParams) -> Configuration:
    """Canonical sorted representative of a set of sites (taken mod L)."""
    out = tuple(sorted(int(s) % params.L for s in sites))
    if len(out) != params.N or len(set(out)) != params.N:
        raise InvalidArgumentError("configuration must hold N distinct sites", sites=tuple(sites), N=params.N)
    return out


def compact_configuration(params: LatticeParams) -> Configuration:
    return config_from_partition(Partition(()), params)


def config_from_partition(lam, params: LatticeParams) -> Configuration:
    lam = as_partition(lam)
    L, N = params.L, params.N
    if lam.length > N or lam[0] > L - N:
        raise InvalidArgumentError("partition outside the (L-N) x N box", lam=str(lam), L=L, N=N)
    return tuple(sorted((lam[i] + N - 1 - i - params.p) % L for i in range(N)))


def partition_from_config(xi: Sequence[int], params: LatticeParams) -> Partition:
    """Inverse of config_from_partition.

    The shifted parts lam_i + N - i - p all lie in the window [-p, L-1-p],
    so each site has exactly one representative there.
    """
    L, N, p = params.L, params.N, params.p
    xi = make_configuration(xi, params)
    v = sorted((((s + p) % L) - p for s in xi), reverse=True)
    return Partition(tuple(v[i] - (N - 1 - i) + p for i in range(N)))


def symmetric_positions(lam, params: LatticeParams) -> List[float]:
    """u_i = lam_i + (N+1)/2 - i, congruent to xi_i + gamma mod L."""
    lam = as_partition(lam)
    N = params.N
    return [lam[i] + (N + 1) / 2.0 - (i + 1) for i in range(N)]


def enumerate_configurations(params: LatticeParams, cap: Optional[int] = None) -> List[Configuration]:
    """All C(L, N) configurations in colexicographic order."""
    cap = settings.STATE_CAP if cap is None else cap
    if params.n_states > cap:
        raise ResourceCapError(
            "state space exceeds the configured cap", L=params.L, N=params.N, states=params.n_states, cap=cap
        )
    return sorted(combinations(range(params.L), params.N), key=lambda c: c[::-1])


@dataclass(frozen=True)
class StateSpace:
    params: LatticeParams
    configs: Tuple[Configuration, ...]

    @classmethod
    def build(cls, params: LatticeParams) -> "StateSpace":
        return cls(params, tuple(enumerate_configurations(params)))

    @cached_property
    def index(self) -> Dict[Configuration, int]:
        return {c: i for i, c in enumerate(self.configs)}

    @cached_property
    def partitions(self) -> Tuple[Partition, ...]:
        return tuple(partition_from_config(c, self.params) for c in self.configs)

    def __len__(self) -> int:
        return len(self.configs)


def box_partitions(params: LatticeParams) -> List[Partition]:
    return partitions_in_box(params.N, params.L - params.N)


def neighbours(xi: Configuration, params: LatticeParams) -> List[Tuple[Configuration, int, int]]:
    """Admissible single moves: (target configuration, moved index, +-1).

    The moved index refers to the position in ``xi``; a move onto an occupied
    site is excluded. On L = 2 both directions lead to the same target and
    are listed twice, matching the multigraph adjacency.
    """
    L = params.L
    occupied = set(xi)
    out = []
    for j, s in enumerate(xi):
        for d in (1, -1):
            t = (s + d) % L
            if t in occupied:
                continue
            eta = tuple(sorted(occupied - {s} | {t}))
            out.append((eta, j, d))
    return out


def colex_rank(xi: Sequence[int]) -> int:
    """Position of a sorted configuration in colexicographic order: sum_k C(xi_k, k+1)."""
    return sum(comb(s, k + 1) for k, s in enumerate(sorted(xi)))
