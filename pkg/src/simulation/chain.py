"""Exact sampling of the maximal-entropy exclusion chain.

The chain is simulated on the tagged Z-lift x_1 < ... < x_N < x_1 + L, so
windings come for free; the ring configuration is the sorted x mod L. A
move of particle j by d has unnormalized weight psi(eta)/psi(xi), the O(N)
sine ratio prod_{i != j} |sin(pi (x_j + d - x_i)/L)| / |sin(pi (x_j - x_i)/L)|,
and is drawn by inverse CDF from one pre-drawn uniform per step.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.accel import njit, prange
from ..core.errors import InvalidArgumentError
from ..core.logging import stage
from ..messep.lattice import Configuration, LatticeParams, make_configuration

logger = logging.getLogger(__name__)

CHUNK_PATHS = 4096


# --- compiled kernels ---

@njit(cache=True)
def _move_weights(lift, L, weights, movers, dirs):
    N = lift.shape[0]
    count = 0
    for j in range(N):
        for q in range(2):
            d = 1 - 2 * q
            if d == 1:
                nxt = lift[j + 1] if j < N - 1 else lift[0] + L
                if lift[j] + 1 >= nxt:
                    continue
            else:
                prv = lift[j - 1] if j > 0 else lift[N - 1] - L
                if lift[j] - 1 <= prv:
                    continue
            w = 1.0
            for i in range(N):
                if i == j:
                    continue
                num = abs(math.sin(math.pi * (lift[j] + d - lift[i]) / L))
                den = abs(math.sin(math.pi * (lift[j] - lift[i]) / L))
                w *= num / den
            weights[count] = w
            movers[count] = j
            dirs[count] = d
            count += 1
    return count


@njit(cache=True)
def _advance(lift, L, u, weights, movers, dirs):
    count = _move_weights(lift, L, weights, movers, dirs)
    total = 0.0
    for c in range(count):
        total += weights[c]
    target = u * total
    acc = 0.0
    pick = count - 1
    for c in range(count):
        acc += weights[c]
        if target < acc:
            pick = c
            break
    lift[movers[pick]] += dirs[pick]
    return total


@njit(parallel=True, cache=True)
def _simulate_paths(lifts0, uniforms, L, record_at):
    P, N = lifts0.shape
    R = record_at.shape[0]
    out = np.empty((P, R, N), dtype=np.int64)
    for p in prange(P):
        lift = lifts0[p].copy()
        weights = np.empty(2 * N)
        movers = np.empty(2 * N, dtype=np.int64)
        dirs = np.empty(2 * N, dtype=np.int64)
        step = 0
        for r in range(R):
            while step < record_at[r]:
                _advance(lift, L, uniforms[p, step], weights, movers, dirs)
                step += 1
            out[p, r] = lift
    return out


@njit(cache=True)
def _trajectory(lift0, uniforms, L):
    S = uniforms.shape[0]
    N = lift0.shape[0]
    out = np.empty((S + 1, N), dtype=np.int64)
    lift = lift0.copy()
    weights = np.empty(2 * N)
    movers = np.empty(2 * N, dtype=np.int64)
    dirs = np.empty(2 * N, dtype=np.int64)
    out[0] = lift
    for s in range(S):
        _advance(lift, L, uniforms[s], weights, movers, dirs)
        out[s + 1] = lift
    return out


# --- states ---

def project(lift: np.ndarray, L: int) -> Configuration:
    return tuple(int(v) for v in np.sort(np.mod(lift, L)))


@dataclass
class ChainState:
    params: LatticeParams
    lift: np.ndarray
    step_count: int = 0

    @property
    def config(self) -> Configuration:
        return project(self.lift, self.params.L)

    def check(self) -> None:
        x, L = self.lift, self.params.L
        if np.any(np.diff(x) <= 0) or x[-1] >= x[0] + L:
            raise InvalidArgumentError("lift left the chamber", lift=tuple(int(v) for v in x), L=L)


def initial_state(config: Sequence[int], params: LatticeParams) -> ChainState:
    """Tag the lowest occupied site; the lift is the sorted configuration itself."""
    xi = make_configuration(config, params)
    return ChainState(params=params, lift=np.array(xi, dtype=np.int64), step_count=0)


def transition_probabilities(state: ChainState) -> List[Tuple[Configuration, float]]:
    """Normalized move probabilities from ``state`` (targets may repeat on L = 2)."""
    N, L = state.params.N, state.params.L
    weights = np.empty(2 * N)
    movers = np.empty(2 * N, dtype=np.int64)
    dirs = np.empty(2 * N, dtype=np.int64)
    count = _move_weights(state.lift, L, weights, movers, dirs)
    total = weights[:count].sum()
    out = []
    for c in range(count):
        lift = state.lift.copy()
        lift[movers[c]] += dirs[c]
        out.append((project(lift, L), float(weights[c] / total)))
    return out


def step(state: ChainState, rng: np.random.Generator, debug: bool = False) -> ChainState:
    N, L = state.params.N, state.params.L
    lift = state.lift.copy()
    weights = np.empty(2 * N)
    movers = np.empty(2 * N, dtype=np.int64)
    dirs = np.empty(2 * N, dtype=np.int64)
    total = _advance(lift, L, rng.random(), weights, movers, dirs)
    new = ChainState(params=state.params, lift=lift, step_count=state.step_count + 1)
    if debug:
        new.check()
        if abs(total - state.params.rho) > 1e-9 * state.params.rho:
            logger.warning("move weights sum to %.12g, expected rho=%.12g", total, state.params.rho)
    return new


# --- ensembles ---

@dataclass
class EmpiricalMeasure:
    angles: np.ndarray

    def moment(self, n: int) -> complex:
        """M_n = (1/N) sum_k exp(i n theta_k); M_0 = 1 and M_{-n} = conj M_n."""
        return complex(np.mean(np.exp(1j * n * np.asarray(self.angles))))

    def moments(self, n_max: int) -> np.ndarray:
        return np.array([self.moment(n) for n in range(-n_max, n_max + 1)])


@dataclass
class RunSpec:
    params: LatticeParams
    times: Sequence[float]
    n_paths: int
    seed: int
    initial: Optional[Configuration] = None
    initial_configs: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.n_paths < 1:
            raise InvalidArgumentError("ensemble needs at least one path", n_paths=self.n_paths)
        if not len(self.times):
            raise InvalidArgumentError("no recording times given")
        if any(t < 0 for t in self.times):
            raise InvalidArgumentError("recording times must be nonnegative", times=list(self.times))

    @classmethod
    def from_steps(cls, params: LatticeParams, steps: Sequence[int], **kwargs) -> "RunSpec":
        """Recording points given as raw step counts instead of diffusive times."""
        L2 = params.L * params.L
        return cls(params=params, times=[s / L2 for s in steps], **kwargs)

    @property
    def record_steps(self) -> np.ndarray:
        """Diffusive times t mapped to floor(L^2 t) steps."""
        L = self.params.L
        return np.array([int(math.floor(L * L * t + 1e-9)) for t in self.times], dtype=np.int64)


@dataclass
class EnsembleRecord:
    spec: RunSpec
    steps: np.ndarray
    lifts: np.ndarray = field(repr=False)

    @property
    def times(self) -> List[float]:
        return list(self.spec.times)

    def angles(self, r: int) -> np.ndarray:
        """(paths, N) array of 2 pi X_k / L at recording index r."""
        L = self.spec.params.L
        return 2 * np.pi * np.mod(self.lifts[:, r, :], L) / L

    def measures(self, path: int) -> List[Tuple[float, "EmpiricalMeasure"]]:
        L = self.spec.params.L
        return [
            (t, EmpiricalMeasure(2 * np.pi * np.mod(self.lifts[path, r], L) / L))
            for r, t in enumerate(self.spec.times)
        ]


def path_uniforms(seed: int, n_paths: int, n_steps: int, start: int = 0) -> np.ndarray:
    """One independent uniform stream per path.

    Path i uses the i-th child of SeedSequence(seed), the same stream
    ``SeedSequence(seed).spawn`` would hand out, so chunking never changes it.
    """
    out = np.empty((n_paths, max(n_steps, 1)))
    for i in range(n_paths):
        ss = np.random.SeedSequence(seed, spawn_key=(start + i,))
        out[i] = np.random.default_rng(ss).random(max(n_steps, 1))
    return out


def run(spec: RunSpec) -> EnsembleRecord:
    params = spec.params
    steps = spec.record_steps
    order = np.argsort(steps, kind="stable")
    if np.any(np.diff(steps[order]) < 0):
        raise InvalidArgumentError("recording steps must be sortable")
    if spec.initial_configs is not None:
        lifts0 = np.asarray(spec.initial_configs, dtype=np.int64)
        if lifts0.shape != (spec.n_paths, params.N):
            raise InvalidArgumentError("initial_configs must be (n_paths, N)", shape=lifts0.shape)
        lifts0 = np.sort(np.mod(lifts0, params.L), axis=1)
    else:
        start = initial_state(spec.initial, params) if spec.initial is not None else None
        if start is None:
            raise InvalidArgumentError("run needs an initial configuration")
        lifts0 = np.tile(start.lift, (spec.n_paths, 1))

    n_steps = int(steps.max())
    out = np.empty((spec.n_paths, len(steps), params.N), dtype=np.int64)
    with stage(logger, "simulate", L=params.L, N=params.N, paths=spec.n_paths, steps=n_steps):
        for lo in range(0, spec.n_paths, CHUNK_PATHS):
            hi = min(spec.n_paths, lo + CHUNK_PATHS)
            u = path_uniforms(spec.seed, hi - lo, n_steps, start=lo)
            rec = _simulate_paths(lifts0[lo:hi], u, params.L, steps[order])
            out[lo:hi][:, order, :] = rec
    return EnsembleRecord(spec=spec, steps=steps, lifts=out)


def trajectory(config: Sequence[int], params: LatticeParams, n_steps: int, seed: int) -> np.ndarray:
    """Full lift history (n_steps + 1, N) of a single chain."""
    start = initial_state(config, params)
    u = path_uniforms(seed, 1, n_steps)[0][:n_steps]
    return _trajectory(start.lift, u, params.L)
